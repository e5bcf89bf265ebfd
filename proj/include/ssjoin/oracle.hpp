#pragma once

#include <cstdint>
#include <vector>

#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"

namespace ssjoin {

// All-pairs reference join: |r ∩ s| by sorted merge for every pair, exact
// threshold comparison. Correctness baseline, not a fast path.
std::vector<ResultPair> brute_force_join(const Collection& R,
                                         const Collection& S,
                                         Coefficient coeff,
                                         const Threshold& t);

struct DiffReport {
  std::vector<ResultPair> missing;  // in oracle, not in candidate
  std::vector<ResultPair> extra;    // in candidate, not in oracle
  // (r, s) present in both with different intersection sizes
  std::vector<std::pair<ResultPair, ResultPair>> score_mismatches;

  bool empty() const {
    return missing.empty() && extra.empty() && score_mismatches.empty();
  }
};

DiffReport verify(const Collection& R, const Collection& S, Coefficient coeff,
                  const Threshold& t,
                  const std::vector<ResultPair>& candidate);

}  // namespace ssjoin
