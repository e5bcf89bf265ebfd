#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"

namespace ssjoin {

enum class Strategy { LoadAware, Hash };

const char* strategy_name(Strategy s);

struct LengthRange {
  std::uint32_t lo{0};
  std::uint32_t hi{0};

  bool contains(std::uint32_t v) const { return v >= lo && v <= hi; }
  friend bool operator==(const LengthRange& a, const LengthRange& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

struct Partition {
  std::uint32_t index{1};  // 1..k
  // absent when k exceeds what the covered span can hold
  std::optional<LengthRange> range;
  std::uint64_t estimated_load{0};
};

struct PartitionPlan {
  Strategy strategy{Strategy::LoadAware};
  std::uint32_t k{1};
  std::vector<Partition> partitions;
  std::optional<LengthRange> coverage;  // S length span; absent if S empty
  std::uint64_t psi{0};                 // minimized maximum estimated load
};

// Cost of one worker owning S lengths [range_lo, range_hi]: the product of
// the replicated-R element volume and the local S element volume, plus the
// tree-build volume. Empty sums contribute zero.
std::uint64_t load(std::uint32_t range_lo, std::uint32_t range_hi,
                   const SizeHistogram& hist_r, const SizeHistogram& hist_s,
                   Coefficient coeff, const Threshold& t);

// Split the S length span into k contiguous ranges minimizing the maximum
// load; tie on the smallest split point.
PartitionPlan optimal_partition(const SizeHistogram& hist_r,
                                const SizeHistogram& hist_s, std::uint32_t k,
                                Coefficient coeff, const Threshold& t);

PartitionPlan hash_partition(std::uint32_t k);

// Unique partition index (1-based) owning |s|. Throws RoutingError when |s|
// is outside the plan's coverage.
std::uint32_t route_s(const PartitionPlan& plan, const SetRecord& s);

// All partition indices whose range intersects [lb_r, ub_r]; may be empty.
std::vector<std::uint32_t> route_r(const PartitionPlan& plan,
                                   const SetRecord& r, Coefficient coeff,
                                   const Threshold& t);

std::string plan_json(const PartitionPlan& plan);

}  // namespace ssjoin
