#include "ssjoin/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

#include "ssjoin/kernels.hpp"

namespace ssjoin {

namespace {

#ifndef NDEBUG
std::uint32_t intersect_by_membership(const std::vector<ElementId>& a,
                                      const std::vector<ElementId>& b) {
  std::unordered_set<ElementId> lookup(a.begin(), a.end());
  std::uint32_t count = 0;
  for (ElementId x : b) count += lookup.count(x) ? 1 : 0;
  return count;
}
#endif

}  // namespace

std::vector<ResultPair> brute_force_join(const Collection& R,
                                         const Collection& S,
                                         Coefficient coeff,
                                         const Threshold& t) {
  t.require_valid_for(coeff);
  std::vector<ResultPair> pairs;
  for (const SetRecord& r : R.records) {
    for (const SetRecord& s : S.records) {
      const std::uint32_t f = kernels::intersect_size(r.elements, s.elements);
      assert(f == intersect_by_membership(r.elements, s.elements));
      if (f > 0 && meets_threshold(coeff, r.size(), s.size(), f, t))
        pairs.push_back(ResultPair{r.id.index, s.id.index,
                                   similarity(coeff, r.size(), s.size(), f)});
    }
  }
  return pairs;  // already (r, s) ordered by the loop structure
}

DiffReport verify(const Collection& R, const Collection& S, Coefficient coeff,
                  const Threshold& t,
                  const std::vector<ResultPair>& candidate) {
  std::vector<ResultPair> expected = brute_force_join(R, S, coeff, t);
  std::vector<ResultPair> got = candidate;
  std::sort(got.begin(), got.end());

  DiffReport diff;
  std::size_t i = 0, j = 0;
  while (i < expected.size() && j < got.size()) {
    const ResultPair& e = expected[i];
    const ResultPair& g = got[j];
    if (e.r_index == g.r_index && e.s_index == g.s_index) {
      if (!(e == g)) diff.score_mismatches.emplace_back(e, g);
      ++i;
      ++j;
    } else if (e < g) {
      diff.missing.push_back(e);
      ++i;
    } else {
      diff.extra.push_back(g);
      ++j;
    }
  }
  for (; i < expected.size(); ++i) diff.missing.push_back(expected[i]);
  for (; j < got.size(); ++j) diff.extra.push_back(got[j]);
  return diff;
}

}  // namespace ssjoin
