#include "ssjoin/lfvt.hpp"

#include <algorithm>
#include <limits>

namespace ssjoin {

namespace {

void check_consistent(const SeqTuple& have, const SeqTuple& want) {
  if (have.set_index == want.set_index && have.set_size != want.set_size)
    throw CorruptionError("set " + std::to_string(want.set_index) +
                          " appears with sizes " +
                          std::to_string(have.set_size) + " and " +
                          std::to_string(want.set_size));
}

}  // namespace

LfvtIndex LfvtIndex::build(const ReorganizedCollection& sp) {
  LfvtIndex idx;
  idx.nodes_.push_back(LfvtNode{});  // root with empty run

  // Pass 1: shape the tree.
  for (const ElementSequence& entry : sp.entries) {
    const std::vector<SeqTuple>& seq = entry.tuples;
    std::size_t i = 0;
    std::uint32_t node = kRoot;

    while (i < seq.size()) {
      auto child_it = idx.nodes_[node].children.find(seq[i].set_index);
      if (child_it == idx.nodes_[node].children.end()) {
        // No branch starts with this tuple. Extend a leaf's run in place;
        // otherwise (root, or an interior node) open a new child.
        const std::uint32_t id = static_cast<std::uint32_t>(idx.nodes_.size());
        if (node != kRoot && idx.nodes_[node].children.empty()) {
          idx.nodes_[node].tuples.insert(idx.nodes_[node].tuples.end(),
                                         seq.begin() + i, seq.end());
        } else {
          LfvtNode fresh;
          fresh.tuples.assign(seq.begin() + i, seq.end());
          fresh.parent = node;
          idx.nodes_[node].children.emplace(seq[i].set_index, id);
          idx.nodes_.push_back(std::move(fresh));
        }
        break;
      }

      const std::uint32_t child = child_it->second;
      std::size_t j = 0;
      while (j < idx.nodes_[child].tuples.size() && i < seq.size() &&
             idx.nodes_[child].tuples[j] == seq[i]) {
        ++j;
        ++i;
      }
      if (j == idx.nodes_[child].tuples.size()) {
        node = child;  // consumed the whole run, descend
        continue;
      }
      if (i == seq.size()) break;  // full match ending mid-run

      // Diverged at offset j: split child into [0, j) kept and a new node
      // carrying the remainder plus the original children, then attach the
      // unmatched suffix as a sibling.
      check_consistent(idx.nodes_[child].tuples[j], seq[i]);
      const std::uint32_t carried =
          static_cast<std::uint32_t>(idx.nodes_.size());
      LfvtNode rest;
      rest.tuples.assign(idx.nodes_[child].tuples.begin() +
                             static_cast<std::ptrdiff_t>(j),
                         idx.nodes_[child].tuples.end());
      rest.parent = child;
      rest.children = std::move(idx.nodes_[child].children);
      idx.nodes_.push_back(std::move(rest));
      for (const auto& [key, grandchild] : idx.nodes_[carried].children)
        idx.nodes_[grandchild].parent = carried;

      const std::uint32_t branch =
          static_cast<std::uint32_t>(idx.nodes_.size());
      LfvtNode fresh;
      fresh.tuples.assign(seq.begin() + static_cast<std::ptrdiff_t>(i),
                          seq.end());
      fresh.parent = child;
      idx.nodes_.push_back(std::move(fresh));

      LfvtNode& split = idx.nodes_[child];
      split.tuples.resize(j);
      split.tuples.shrink_to_fit();
      split.children.clear();
      split.children.emplace(idx.nodes_[carried].tuples[0].set_index, carried);
      split.children.emplace(idx.nodes_[branch].tuples[0].set_index, branch);
      break;
    }
  }

  // Flat tuple numbering for probe scratch.
  idx.tuple_base_.resize(idx.nodes_.size() + 1, 0);
  for (std::size_t n = 0; n < idx.nodes_.size(); ++n) {
    idx.tuple_base_[n + 1] = idx.tuple_base_[n] + idx.nodes_[n].tuples.size();
    for (const SeqTuple& tuple : idx.nodes_[n].tuples)
      idx.set_index_limit_ = std::max(idx.set_index_limit_,
                                      tuple.set_index + 1);
  }

  // Pass 2: resolve terminals against the finished shape.
  for (const ElementSequence& entry : sp.entries) {
    const std::vector<SeqTuple>& seq = entry.tuples;
    std::uint32_t node = kRoot;
    std::size_t i = 0;
    while (i < seq.size()) {
      auto child_it = idx.nodes_[node].children.find(seq[i].set_index);
      if (child_it == idx.nodes_[node].children.end())
        throw CorruptionError("terminal resolution lost a sequence branch");
      node = child_it->second;
      const std::vector<SeqTuple>& run = idx.nodes_[node].tuples;
      for (std::size_t j = 0; j < run.size() && i < seq.size(); ++j) {
        if (!(run[j] == seq[i]))
          throw CorruptionError("terminal resolution diverged from its run");
        ++i;
        if (i == seq.size()) {
          idx.element_table_.emplace(
              entry.element,
              ElementEntry{static_cast<std::uint32_t>(seq.size()), node,
                           static_cast<std::uint32_t>(j)});
        }
      }
    }
  }
  return idx;
}

ProbeResult LfvtIndex::probe(const SetRecord& r, Coefficient coeff,
                             const Threshold& t,
                             const ProbeOptions& options) const {
  LfvtProber prober(*this);
  return prober.probe(r, coeff, t, options);
}

LfvtProber::LfvtProber(const LfvtIndex& idx)
    : idx_(&idx),
      start_support_(idx.tuple_total(), 0),
      counts_(idx.set_index_limit_, 0),
      count_sizes_(idx.set_index_limit_, 0) {}

void LfvtProber::reset_counts() {
  for (std::uint32_t s : touched_) counts_[s] = 0;
  touched_.clear();
}

void LfvtProber::walk(const SetRecord& r, Coefficient coeff,
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
    start_support_[idx_->tuple_ordinal(it->second.node, it->second.offset)] +=
        1;
    order_.push_back(
        Start{a, it->second.seq_len, it->second.node, it->second.offset});
  }
  std::sort(order_.begin(), order_.end(), [](const Start& a, const Start& b) {
    if (a.seq_len != b.seq_len) return a.seq_len > b.seq_len;
    return a.element < b.element;
  });

  std::size_t live = order_.size();
  const auto& nodes = idx_->nodes_;
  for (const Start& p : order_) {
    if (live == 0) break;
    const std::uint64_t start_ordinal = idx_->tuple_ordinal(p.node, p.offset);
    std::uint64_t support = start_support_[start_ordinal];
    if (support == 0) continue;  // absorbed earlier
    start_support_[start_ordinal] = 0;
    --live;

    std::uint32_t node = p.node;
    std::uint32_t offset = p.offset;
    bool stopped = false;
    while (node != LfvtIndex::kRoot && !stopped) {
      const LfvtNode& n = nodes[node];
      const std::uint64_t base = idx_->tuple_base_[node];
      // walk the run backwards: sizes are non-decreasing toward the root
      for (std::uint32_t j = offset + 1; j-- > 0;) {
        const SeqTuple& tuple = n.tuples[j];
        if (options.early_stop && tuple.set_size > ub) {
          stopped = true;
          break;
        }
        if (live != 0 && start_support_[base + j] != 0) {
          support += start_support_[base + j];
          start_support_[base + j] = 0;
          --live;
        }
        if (tuple.set_size >= lb && tuple.set_size <= ub) {
          if (counts_[tuple.set_index] == 0) {
            touched_.push_back(tuple.set_index);
            count_sizes_[tuple.set_index] = tuple.set_size;
          }
          counts_[tuple.set_index] += support;
        }
      }
      if (!stopped) {
        const std::uint32_t parent = n.parent;
        if (parent == LfvtIndex::kRoot) break;
        offset = static_cast<std::uint32_t>(nodes[parent].tuples.size() - 1);
        node = parent;
      }
    }
  }
}

ProbeResult LfvtProber::probe(const SetRecord& r, Coefficient coeff,
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

void LfvtProber::probe_pairs(const SetRecord& r, Coefficient coeff,
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

std::vector<ResultPair> join_lfvt(const Collection& S, const Collection& R,
                                  Coefficient coeff, const Threshold& t,
                                  const ProbeOptions& options) {
  const LfvtIndex idx = LfvtIndex::build(reorganize(S));
  LfvtProber prober(idx);
  std::vector<ResultPair> pairs;
  for (const SetRecord& r : R.records)
    prober.probe_pairs(r, coeff, t, options, pairs);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

NodeCounts node_counts(const ReorganizedCollection& sp) {
  return NodeCounts{FvtIndex::build(sp).node_count(),
                    LfvtIndex::build(sp).node_count()};
}

}  // namespace ssjoin
