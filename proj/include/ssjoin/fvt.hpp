#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"
#include "ssjoin/reorg.hpp"

namespace ssjoin {

struct ProbeOptions {
  // Stop a walk at the first node whose set size exceeds ub.
  bool early_stop{true};
  // When false, probe with lb=1 and ub unbounded (counts become plain
  // intersection sizes).
  bool length_filter{true};
};

struct ProbeResult {
  // s index -> f_{r,s} restricted to sets inside the length window
  std::unordered_map<std::uint32_t, std::uint64_t> counts;
  // |s| of every counted set, read off the visited nodes
  std::unordered_map<std::uint32_t, std::uint32_t> sizes;
  // verified pairs, ascending s index
  std::vector<ResultPair> pairs;
};

struct FvtNode {
  std::uint32_t set_index{0};
  std::uint32_t set_size{0};
  std::uint32_t parent{0};
};

// Prefix tree over element sequences; each node is one (set, size) step and
// the element table points at the terminal node of seq(a).
class FvtIndex {
 public:
  struct ElementEntry {
    std::uint32_t seq_len{0};
    std::uint32_t terminal{0};
  };

  static constexpr std::uint32_t kRoot = 0;

  static FvtIndex build(const ReorganizedCollection& sp);

  ProbeResult probe(const SetRecord& r, Coefficient coeff, const Threshold& t,
                    const ProbeOptions& options = {}) const;

  std::size_t node_count() const { return nodes_.size() - 1; }  // excl. root
  const std::vector<FvtNode>& nodes() const { return nodes_; }
  const std::unordered_map<ElementId, ElementEntry>& element_table() const {
    return element_table_;
  }
  // Child of `parent` labeled with `set_index`, or kRoot if absent.
  std::uint32_t find_child(std::uint32_t parent, std::uint32_t set_index) const;
  // One past the largest set index seen in the tree.
  std::uint32_t set_index_limit() const { return set_index_limit_; }

 private:
  friend class FvtProber;
  std::vector<FvtNode> nodes_;  // nodes_[0] is the root sentinel
  std::unordered_map<std::uint64_t, std::uint32_t> child_;
  std::unordered_map<ElementId, ElementEntry> element_table_;
  std::uint32_t set_index_limit_{0};
};

// Reusable probe scratch bound to one index; one instance per worker.
class FvtProber {
 public:
  explicit FvtProber(const FvtIndex& idx);

  ProbeResult probe(const SetRecord& r, Coefficient coeff, const Threshold& t,
                    const ProbeOptions& options = {});

  // Verified pairs only, appended to out.
  void probe_pairs(const SetRecord& r, Coefficient coeff, const Threshold& t,
                   const ProbeOptions& options, std::vector<ResultPair>& out);

 private:
  void walk(const SetRecord& r, Coefficient coeff, const Threshold& t,
            const ProbeOptions& options);
  void reset_counts();

  const FvtIndex* idx_;
  std::vector<std::uint64_t> start_support_;  // per node
  std::vector<std::uint64_t> counts_;         // per set index
  std::vector<std::uint32_t> count_sizes_;    // per set index
  std::vector<std::uint32_t> touched_;        // set indices with counts
  struct Start {
    ElementId element;
    std::uint32_t seq_len;
    std::uint32_t terminal;
  };
  std::vector<Start> order_;
};

// Sequential join: index S, probe every r in id order, pairs sorted by
// (r index, s index).
std::vector<ResultPair> join_fvt(const Collection& S, const Collection& R,
                                 Coefficient coeff, const Threshold& t,
                                 const ProbeOptions& options = {});

}  // namespace ssjoin
