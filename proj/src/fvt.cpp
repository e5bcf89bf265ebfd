#include "ssjoin/fvt.hpp"

#include <algorithm>
#include <limits>

namespace ssjoin {

namespace {

std::uint64_t child_key(std::uint32_t parent, std::uint32_t set_index) {
  return (static_cast<std::uint64_t>(parent) << 32) | set_index;
}

}  // namespace

std::uint32_t FvtIndex::find_child(std::uint32_t parent,
                                   std::uint32_t set_index) const {
  auto it = child_.find(child_key(parent, set_index));
  return it == child_.end() ? kRoot : it->second;
}

FvtIndex FvtIndex::build(const ReorganizedCollection& sp) {
  FvtIndex idx;
  idx.nodes_.push_back(FvtNode{0, 0, kRoot});  // root

  std::uint64_t total = 0;
  for (const ElementSequence& entry : sp.entries) total += entry.tuples.size();
  idx.nodes_.reserve(total + 1);
  idx.child_.reserve(total);
  idx.element_table_.reserve(sp.entries.size());

  for (const ElementSequence& entry : sp.entries) {
    std::uint32_t node = kRoot;
    for (const SeqTuple& tuple : entry.tuples) {
      auto [it, inserted] = idx.child_.try_emplace(
          child_key(node, tuple.set_index),
          static_cast<std::uint32_t>(idx.nodes_.size()));
      if (inserted) {
        idx.nodes_.push_back(FvtNode{tuple.set_index, tuple.set_size, node});
        idx.set_index_limit_ =
            std::max(idx.set_index_limit_, tuple.set_index + 1);
      } else if (idx.nodes_[it->second].set_size != tuple.set_size) {
        throw CorruptionError(
            "set " + std::to_string(tuple.set_index) +
            " appears with sizes " +
            std::to_string(idx.nodes_[it->second].set_size) + " and " +
            std::to_string(tuple.set_size));
      }
      node = it->second;
    }
    idx.element_table_.emplace(
        entry.element,
        ElementEntry{static_cast<std::uint32_t>(entry.tuples.size()), node});
  }
  return idx;
}

ProbeResult FvtIndex::probe(const SetRecord& r, Coefficient coeff,
                            const Threshold& t,
                            const ProbeOptions& options) const {
  FvtProber prober(*this);
  return prober.probe(r, coeff, t, options);
}

FvtProber::FvtProber(const FvtIndex& idx)
    : idx_(&idx),
      start_support_(idx.nodes_.size(), 0),
      counts_(idx.set_index_limit_, 0),
      count_sizes_(idx.set_index_limit_, 0) {}

void FvtProber::reset_counts() {
  for (std::uint32_t s : touched_) counts_[s] = 0;
  touched_.clear();
}

void FvtProber::walk(const SetRecord& r, Coefficient coeff,
                     const Threshold& t, const ProbeOptions& options) {
  reset_counts();

  LengthBounds bounds{1, std::nullopt};
  if (options.length_filter) bounds = length_bounds(coeff, r.size(), t);
  const std::uint64_t lb = bounds.lb;
  const std::uint64_t ub =
      bounds.ub ? *bounds.ub : std::numeric_limits<std::uint64_t>::max();

  order_.clear();
  const auto& table = idx_->element_table_;
  for (ElementId a : r.elements) {
    const auto it = table.find(a);
    if (it == table.end()) continue;
    start_support_[it->second.terminal] += 1;
    order_.push_back(Start{a, it->second.seq_len, it->second.terminal});
  }
  std::sort(order_.begin(), order_.end(), [](const Start& a, const Start& b) {
    if (a.seq_len != b.seq_len) return a.seq_len > b.seq_len;
    return a.element < b.element;
  });

  std::size_t live = order_.size();
  const auto& nodes = idx_->nodes_;
  for (const Start& p : order_) {
    if (live == 0) break;
    std::uint64_t support = start_support_[p.terminal];
    if (support == 0) continue;  // absorbed by an earlier walk
    start_support_[p.terminal] = 0;
    --live;

    std::uint32_t node = p.terminal;
    while (node != FvtIndex::kRoot) {
      const FvtNode& n = nodes[node];
      if (options.early_stop && n.set_size > ub) break;
      if (live != 0 && start_support_[node] != 0) {
        support += start_support_[node];
        start_support_[node] = 0;
        --live;
      }
      if (n.set_size >= lb && n.set_size <= ub) {
        if (counts_[n.set_index] == 0) {
          touched_.push_back(n.set_index);
          count_sizes_[n.set_index] = n.set_size;
        }
        counts_[n.set_index] += support;
      }
      node = n.parent;
    }
  }
  // every start was either consumed by its own walk or absorbed into an
  // earlier one, so start_support_ is all zero again here
}

ProbeResult FvtProber::probe(const SetRecord& r, Coefficient coeff,
                             const Threshold& t,
                             const ProbeOptions& options) {
  walk(r, coeff, t, options);
  ProbeResult result;
  result.counts.reserve(touched_.size());
  result.sizes.reserve(touched_.size());
  for (std::uint32_t s : touched_) {
    result.counts.emplace(s, counts_[s]);
    result.sizes.emplace(s, count_sizes_[s]);
    if (meets_threshold(coeff, r.size(), count_sizes_[s], counts_[s], t))
      result.pairs.push_back(
          ResultPair{r.id.index, s,
                     similarity(coeff, r.size(), count_sizes_[s], counts_[s])});
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

void FvtProber::probe_pairs(const SetRecord& r, Coefficient coeff,
                            const Threshold& t, const ProbeOptions& options,
                            std::vector<ResultPair>& out) {
  walk(r, coeff, t, options);
  const std::size_t first = out.size();
  for (std::uint32_t s : touched_) {
    if (meets_threshold(coeff, r.size(), count_sizes_[s], counts_[s], t))
      out.push_back(
          ResultPair{r.id.index, s,
                     similarity(coeff, r.size(), count_sizes_[s], counts_[s])});
  }
  std::sort(out.begin() + first, out.end());
}

std::vector<ResultPair> join_fvt(const Collection& S, const Collection& R,
                                 Coefficient coeff, const Threshold& t,
                                 const ProbeOptions& options) {
  const FvtIndex idx = FvtIndex::build(reorganize(S));
  FvtProber prober(idx);
  std::vector<ResultPair> pairs;
  for (const SetRecord& r : R.records)
    prober.probe_pairs(r, coeff, t, options, pairs);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace ssjoin
