#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ssjoin/fvt.hpp"
#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"
#include "ssjoin/reorg.hpp"

namespace ssjoin {

struct LfvtNode {
  std::vector<SeqTuple> tuples;  // non-increasing sizes; empty only at root
  std::uint32_t parent{0};
  // keyed by the first tuple's set index
  std::unordered_map<std::uint32_t, std::uint32_t> children;
};

// FVT with non-branching runs collapsed into per-node tuple arrays. Element
// entries address a (node, offset) pair.
class LfvtIndex {
 public:
  struct ElementEntry {
    std::uint32_t seq_len{0};
    std::uint32_t node{0};
    std::uint32_t offset{0};
  };

  static constexpr std::uint32_t kRoot = 0;

  // Two passes: shape the tree first, then resolve element terminals, so
  // later splits never invalidate recorded (node, offset) entries.
  static LfvtIndex build(const ReorganizedCollection& sp);

  ProbeResult probe(const SetRecord& r, Coefficient coeff, const Threshold& t,
                    const ProbeOptions& options = {}) const;

  std::size_t node_count() const { return nodes_.size() - 1; }
  const std::vector<LfvtNode>& nodes() const { return nodes_; }
  const std::unordered_map<ElementId, ElementEntry>& element_table() const {
    return element_table_;
  }
  std::uint32_t set_index_limit() const { return set_index_limit_; }
  // ordinal of (node, offset) in a flat numbering of all tuples
  std::uint64_t tuple_ordinal(std::uint32_t node, std::uint32_t offset) const {
    return tuple_base_[node] + offset;
  }
  std::uint64_t tuple_total() const { return tuple_base_.back(); }

 private:
  friend class LfvtProber;
  std::vector<LfvtNode> nodes_;
  std::unordered_map<ElementId, ElementEntry> element_table_;
  std::vector<std::uint64_t> tuple_base_;  // per node, plus total at the end
  std::uint32_t set_index_limit_{0};
};

class LfvtProber {
 public:
  explicit LfvtProber(const LfvtIndex& idx);

  ProbeResult probe(const SetRecord& r, Coefficient coeff, const Threshold& t,
                    const ProbeOptions& options = {});

  void probe_pairs(const SetRecord& r, Coefficient coeff, const Threshold& t,
                   const ProbeOptions& options, std::vector<ResultPair>& out);

 private:
  void walk(const SetRecord& r, Coefficient coeff, const Threshold& t,
            const ProbeOptions& options);
  void reset_counts();

  const LfvtIndex* idx_;
  std::vector<std::uint64_t> start_support_;  // per tuple ordinal
  std::vector<std::uint64_t> counts_;         // per set index
  std::vector<std::uint32_t> count_sizes_;
  std::vector<std::uint32_t> touched_;
  struct Start {
    ElementId element;
    std::uint32_t seq_len;
    std::uint32_t node;
    std::uint32_t offset;
  };
  std::vector<Start> order_;
};

std::vector<ResultPair> join_lfvt(const Collection& S, const Collection& R,
                                  Coefficient coeff, const Threshold& t,
                                  const ProbeOptions& options = {});

// Non-root node counts of both index shapes over the same input.
struct NodeCounts {
  std::size_t fvt{0};
  std::size_t lfvt{0};
};
NodeCounts node_counts(const ReorganizedCollection& sp);

}  // namespace ssjoin
