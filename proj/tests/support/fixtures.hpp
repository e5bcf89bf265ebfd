#pragma once

#include <vector>

#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"
#include "ssjoin/reorg.hpp"

namespace ssjoin::testsupport {

// R = {r0={1,2,3}, r1={3,4}}, S = {s0={1,3,4}, s1={2,3}, s2={1,2}}.
// At jaccard t=0.6 the join is {(r0,s1),(r0,s2),(r1,s0)}, all 2/3.
inline Collection example1_r() {
  return make_collection(CollectionTag::R, {{1, 2, 3}, {3, 4}});
}

inline Collection example1_s() {
  return make_collection(CollectionTag::S, {{1, 3, 4}, {2, 3}, {1, 2}});
}

// Three element sequences over six sets with sizes 5,5,3,3,2,1 (set ids
// 0..5). Probing {1,3} at jaccard 0.6 must count {3:1, 4:2, 2:2}.
inline ReorganizedCollection partial_sequence_fixture() {
  ReorganizedCollection sp;
  sp.entries.push_back(ElementSequence{
      1, {{0, 5}, {1, 5}, {2, 3}, {4, 3}, {3, 2}}});
  sp.entries.push_back(ElementSequence{3, {{0, 5}, {1, 5}, {2, 3}, {4, 3}}});
  sp.entries.push_back(ElementSequence{5, {{0, 5}, {1, 5}, {4, 3}, {5, 1}}});
  return sp;
}

// Histograms for the partitioning running example: S sizes {5,5,3,3,2,1},
// R sizes {2,3}. With k=2 and t=0.7 the optimal split is [1,3] | [4,5].
inline SizeHistogram running_example_hist_s() {
  return SizeHistogram{{1, 1}, {2, 1}, {3, 2}, {5, 2}};
}

inline SizeHistogram running_example_hist_r() {
  return SizeHistogram{{2, 1}, {3, 1}};
}

}  // namespace ssjoin::testsupport
