#include "ssjoin/planner.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include <json.hpp>

namespace ssjoin {

namespace {

using u128 = unsigned __int128;

std::uint64_t ceil_mul(std::uint64_t v, u128 num, u128 den) {
  return static_cast<std::uint64_t>((v * num + den - 1) / den);
}

std::uint64_t floor_mul(std::uint64_t v, u128 num, u128 den) {
  return static_cast<std::uint64_t>(v * num / den);
}

// Cost queries over weighted prefix sums of both histograms.
class LoadModel {
 public:
  LoadModel(const SizeHistogram& hist_r, const SizeHistogram& hist_s,
            Coefficient coeff, const Threshold& t)
      : coeff_(coeff), t_(t) {
    t.require_valid_for(coeff);
    wr_ = weighted_prefix(hist_r);
    ws_ = weighted_prefix(hist_s);
  }

  // Sum of i*C_r(i) over R lengths whose match window reaches [lo, hi].
  std::uint64_t r_volume(std::uint32_t lo, std::uint32_t hi) const {
    const auto [rlo, rhi] = r_len_range(lo, hi);
    return range_sum(wr_, rlo, rhi);
  }

  std::uint64_t s_volume(std::uint32_t lo, std::uint32_t hi) const {
    return range_sum(ws_, lo, hi);
  }

  std::uint64_t load(std::uint32_t lo, std::uint32_t hi) const {
    const std::uint64_t sv = s_volume(lo, hi);
    if (sv == 0) return 0;
    return r_volume(lo, hi) * sv + sv;
  }

  // R lengths i with lb_i <= hi and ub_i >= lo, by inverting the bound
  // formulas in exact integer arithmetic.
  std::pair<std::uint64_t, std::uint64_t> r_len_range(std::uint32_t lo,
                                                      std::uint32_t hi) const {
    const std::uint64_t n = t_.num;
    const std::uint64_t d = t_.den;
    switch (coeff_) {
      case Coefficient::Jaccard:
        return {ceil_mul(lo, n, d), floor_mul(hi, d, n)};
      case Coefficient::Cosine:
        return {ceil_mul(lo, static_cast<u128>(n) * n,
                         static_cast<u128>(d) * d),
                floor_mul(hi, static_cast<u128>(d) * d,
                          static_cast<u128>(n) * n)};
      case Coefficient::Dice:
        return {ceil_mul(lo, n, 2 * static_cast<u128>(d) - n),
                floor_mul(hi, 2 * static_cast<u128>(d) - n, n)};
      case Coefficient::Overlap:
        // any |r| can match once the window [t, inf) touches the range
        if (static_cast<u128>(hi) * d >= n)
          return {1, std::numeric_limits<std::uint32_t>::max()};
        return {1, 0};  // empty
    }
    throw std::logic_error("unreachable coefficient");
  }

 private:
  static std::vector<std::uint64_t> weighted_prefix(const SizeHistogram& h) {
    const std::uint32_t max_len = h.empty() ? 0 : h.rbegin()->first;
    std::vector<std::uint64_t> prefix(max_len + 2, 0);
    for (const auto& [len, count] : h)
      prefix[len + 1] = static_cast<std::uint64_t>(len) * count;
    for (std::size_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];
    return prefix;
  }

  std::uint64_t range_sum(const std::vector<std::uint64_t>& prefix,
                          std::uint64_t lo, std::uint64_t hi) const {
    if (prefix.size() < 2 || hi < lo) return 0;
    const std::uint64_t max_len = prefix.size() - 2;
    if (lo > max_len) return 0;
    hi = std::min(hi, max_len);
    const std::uint64_t at_lo = lo == 0 ? 0 : prefix[lo];
    return prefix[hi + 1] - at_lo;
  }

  Coefficient coeff_;
  Threshold t_;
  std::vector<std::uint64_t> wr_;
  std::vector<std::uint64_t> ws_;
};

}  // namespace

const char* strategy_name(Strategy s) {
  return s == Strategy::LoadAware ? "load-aware" : "hash";
}

std::uint64_t load(std::uint32_t range_lo, std::uint32_t range_hi,
                   const SizeHistogram& hist_r, const SizeHistogram& hist_s,
                   Coefficient coeff, const Threshold& t) {
  return LoadModel(hist_r, hist_s, coeff, t).load(range_lo, range_hi);
}

PartitionPlan optimal_partition(const SizeHistogram& hist_r,
                                const SizeHistogram& hist_s, std::uint32_t k,
                                Coefficient coeff, const Threshold& t) {
  PartitionPlan plan;
  plan.strategy = Strategy::LoadAware;
  plan.k = k;

  if (hist_s.empty()) {
    for (std::uint32_t i = 1; i <= k; ++i)
      plan.partitions.push_back(Partition{i, std::nullopt, 0});
    return plan;
  }

  const std::uint32_t l_min = hist_s.begin()->first;
  const std::uint32_t l_max = hist_s.rbegin()->first;
  const std::uint32_t span = l_max - l_min + 1;
  const std::uint32_t parts = std::min(k, span);
  plan.coverage = LengthRange{l_min, l_max};

  const LoadModel model(hist_r, hist_s, coeff, t);

  // psi[e][p]: minimum possible maximum load splitting [l_min, l_min+e] into
  // p ranges; split[e][p] is the smallest split achieving it.
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::vector<std::uint64_t>> psi(
      span, std::vector<std::uint64_t>(parts + 1, kInf));
  std::vector<std::vector<std::uint32_t>> split(
      span, std::vector<std::uint32_t>(parts + 1, 0));

  for (std::uint32_t e = 0; e < span; ++e)
    psi[e][1] = model.load(l_min, l_min + e);
  for (std::uint32_t p = 2; p <= parts; ++p) {
    for (std::uint32_t e = p - 1; e < span; ++e) {
      // split i: left [l_min, l_min+i], right [l_min+i+1, l_min+e]
      for (std::uint32_t i = p - 2; i < e; ++i) {
        const std::uint64_t left = psi[i][p - 1];
        const std::uint64_t right = model.load(l_min + i + 1, l_min + e);
        const std::uint64_t cost = std::max(left, right);
        if (cost < psi[e][p]) {
          psi[e][p] = cost;
          split[e][p] = i;
        }
      }
    }
  }

  std::vector<LengthRange> ranges(parts);
  std::uint32_t e = span - 1;
  for (std::uint32_t p = parts; p >= 2; --p) {
    const std::uint32_t i = split[e][p];
    ranges[p - 1] = LengthRange{l_min + i + 1, l_min + e};
    e = i;
  }
  ranges[0] = LengthRange{l_min, l_min + e};

  plan.psi = psi[span - 1][parts];
  std::uint64_t max_load = 0;
  for (std::uint32_t p = 0; p < parts; ++p) {
    const std::uint64_t pl = model.load(ranges[p].lo, ranges[p].hi);
    max_load = std::max(max_load, pl);
    plan.partitions.push_back(Partition{p + 1, ranges[p], pl});
  }
  assert(max_load == plan.psi);
  (void)max_load;
  for (std::uint32_t p = parts; p < k; ++p)
    plan.partitions.push_back(Partition{p + 1, std::nullopt, 0});
  return plan;
}

PartitionPlan hash_partition(std::uint32_t k) {
  PartitionPlan plan;
  plan.strategy = Strategy::Hash;
  plan.k = k;
  for (std::uint32_t i = 1; i <= k; ++i)
    plan.partitions.push_back(Partition{i, std::nullopt, 0});
  return plan;
}

std::uint32_t route_s(const PartitionPlan& plan, const SetRecord& s) {
  for (const Partition& p : plan.partitions)
    if (p.range && p.range->contains(s.size())) return p.index;
  throw RoutingError("set size " + std::to_string(s.size()) +
                     " outside plan coverage");
}

std::vector<std::uint32_t> route_r(const PartitionPlan& plan,
                                   const SetRecord& r, Coefficient coeff,
                                   const Threshold& t) {
  const LengthBounds bounds = length_bounds(coeff, r.size(), t);
  std::vector<std::uint32_t> out;
  for (const Partition& p : plan.partitions) {
    if (!p.range) continue;
    if (p.range->hi >= bounds.lb && (!bounds.ub || p.range->lo <= *bounds.ub))
      out.push_back(p.index);
  }
  return out;
}

std::string plan_json(const PartitionPlan& plan) {
  nlohmann::ordered_json j;
  j["k"] = plan.k;
  j["strategy"] = strategy_name(plan.strategy);
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const Partition& p : plan.partitions) {
    nlohmann::ordered_json pj;
    pj["index"] = p.index;
    if (p.range) {
      pj["lo"] = p.range->lo;
      pj["hi"] = p.range->hi;
    } else {
      pj["lo"] = nullptr;
      pj["hi"] = nullptr;
    }
    pj["load"] = p.estimated_load;
    parts.push_back(pj);
  }
  j["partitions"] = parts;
  j["psi"] = plan.psi;
  return j.dump(2);
}

}  // namespace ssjoin
