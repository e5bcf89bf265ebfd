#include <map>

#include <doctest.h>

#include "ssjoin/lfvt.hpp"
#include "ssjoin/oracle.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace ssjoin;
using namespace ssjoin::testsupport;

namespace {

std::map<std::uint32_t, std::uint64_t> sorted_counts(const ProbeResult& pr) {
  return {pr.counts.begin(), pr.counts.end()};
}

SetRecord make_r(std::uint32_t index, std::vector<ElementId> elements) {
  SetRecord r;
  r.id = SetId{CollectionTag::R, index};
  r.elements = std::move(elements);
  return r;
}

}  // namespace

TEST_CASE("one sequence becomes one node") {
  ReorganizedCollection sp;
  sp.entries.push_back(
      ElementSequence{1, {{0, 5}, {1, 5}, {2, 3}, {4, 3}, {3, 2}}});
  const LfvtIndex idx = LfvtIndex::build(sp);
  CHECK(idx.node_count() == 1);
  CHECK(idx.nodes()[1].tuples.size() == 5);
  CHECK(idx.element_table().at(1).node == 1);
  CHECK(idx.element_table().at(1).offset == 4);
}

TEST_CASE("prefixes share the node through offsets") {
  ReorganizedCollection sp;
  sp.entries.push_back(
      ElementSequence{1, {{0, 5}, {1, 5}, {2, 3}, {4, 3}, {3, 2}}});
  sp.entries.push_back(ElementSequence{3, {{0, 5}, {1, 5}, {2, 3}, {4, 3}}});
  sp.entries.push_back(ElementSequence{2, {{0, 5}, {1, 5}}});
  const LfvtIndex idx = LfvtIndex::build(sp);
  CHECK(idx.node_count() == 1);
  CHECK(idx.element_table().at(3).node == 1);
  CHECK(idx.element_table().at(3).offset == 3);
  CHECK(idx.element_table().at(2).offset == 1);
}

TEST_CASE("divergence splits a node and reparents children") {
  const LfvtIndex idx = LfvtIndex::build(partial_sequence_fixture());
  // a1 -> n1 (5 tuples); a3 shares it; a5 splits after two tuples:
  // n1 = [(0,5),(1,5)], carried = [(2,3),(4,3),(3,2)], branch = [(4,3),(5,1)]
  CHECK(idx.node_count() == 3);
  const auto& root_children = idx.nodes()[LfvtIndex::kRoot].children;
  REQUIRE(root_children.size() == 1);
  const std::uint32_t n1 = root_children.begin()->second;
  CHECK(idx.nodes()[n1].tuples.size() == 2);
  CHECK(idx.nodes()[n1].children.size() == 2);
  CHECK(lfvt_entries_reconstruct(idx, partial_sequence_fixture()));
}

TEST_CASE("appending extends a leaf run in place") {
  // legal input with a short entry first: the longer one extends the leaf
  ReorganizedCollection sp;
  sp.entries.push_back(ElementSequence{9, {{0, 4}, {1, 3}, {2, 3}}});
  sp.entries.push_back(
      ElementSequence{8, {{0, 4}, {1, 3}, {2, 3}, {3, 2}, {4, 1}}});
  const LfvtIndex idx = LfvtIndex::build(sp);
  CHECK(idx.node_count() == 1);
  CHECK(idx.nodes()[1].tuples.size() == 5);
  CHECK(idx.element_table().at(9).offset == 2);
  CHECK(idx.element_table().at(8).offset == 4);
  CHECK(lfvt_entries_reconstruct(idx, sp));
}

TEST_CASE("partial match under an internal node adds a child") {
  ReorganizedCollection sp;
  sp.entries.push_back(ElementSequence{1, {{0, 5}, {1, 4}, {2, 3}}});
  sp.entries.push_back(ElementSequence{2, {{0, 5}, {1, 4}, {3, 3}}});
  sp.entries.push_back(ElementSequence{3, {{0, 5}, {1, 4}, {4, 2}}});
  const LfvtIndex idx = LfvtIndex::build(sp);
  // first split makes [(0,5),(1,4)] with two children; the third sequence
  // hangs a fresh child under the same internal node
  CHECK(idx.node_count() == 4);
  CHECK(lfvt_entries_reconstruct(idx, sp));
  CHECK(lfvt_flattening_matches_fvt(sp));
}

TEST_CASE("inconsistent sizes are corruption") {
  ReorganizedCollection sp;
  sp.entries.push_back(ElementSequence{1, {{0, 5}, {7, 3}}});
  sp.entries.push_back(ElementSequence{2, {{0, 5}, {7, 4}}});
  CHECK_THROWS_AS(LfvtIndex::build(sp), CorruptionError);
}

TEST_CASE("probe matches the worked counts and the FVT probe") {
  const ReorganizedCollection sp = partial_sequence_fixture();
  const LfvtIndex lfvt = LfvtIndex::build(sp);
  const FvtIndex fvt = FvtIndex::build(sp);
  const SetRecord r4 = make_r(4, {1, 3});
  const Threshold t = Threshold::parse("0.6");

  const ProbeResult a = lfvt.probe(r4, Coefficient::Jaccard, t);
  const ProbeResult b = fvt.probe(r4, Coefficient::Jaccard, t);
  const std::map<std::uint32_t, std::uint64_t> expected{
      {3, 1}, {4, 2}, {2, 2}};
  CHECK(sorted_counts(a) == expected);
  CHECK(sorted_counts(b) == expected);
}

TEST_CASE("probe with absent elements is empty") {
  const LfvtIndex idx = LfvtIndex::build(partial_sequence_fixture());
  const ProbeResult pr = idx.probe(make_r(0, {77}), Coefficient::Jaccard,
                                   Threshold::parse("0.6"));
  CHECK(pr.counts.empty());
}

TEST_CASE("probes agree across index kinds on random instances") {
  for (std::uint64_t seed : {11ull, 12ull}) {
    const auto inst = random_instance(seed, {.n_r = 60, .n_s = 80});
    const ReorganizedCollection sp = reorganize(inst.S);
    const LfvtIndex lfvt = LfvtIndex::build(sp);
    const FvtIndex fvt = FvtIndex::build(sp);
    for (const char* ts : {"0.4", "0.7", "1"}) {
      const Threshold t = Threshold::parse(ts);
      for (const SetRecord& r : inst.R.records) {
        const ProbeResult a = lfvt.probe(r, Coefficient::Jaccard, t);
        const ProbeResult b = fvt.probe(r, Coefficient::Jaccard, t);
        CHECK(sorted_counts(a) == sorted_counts(b));
      }
    }
  }
}

TEST_CASE("node counts: compressible runs") {
  ReorganizedCollection sp;
  sp.entries.push_back(
      ElementSequence{1, {{0, 5}, {1, 4}, {2, 3}, {3, 2}, {4, 1}}});
  const NodeCounts counts = node_counts(sp);
  CHECK(counts.fvt == 5);
  CHECK(counts.lfvt == 1);
}

TEST_CASE("node counts: disjoint sequences") {
  ReorganizedCollection sp;
  sp.entries.push_back(ElementSequence{1, {{0, 3}, {1, 2}, {2, 2}}});
  sp.entries.push_back(ElementSequence{2, {{3, 4}, {4, 1}}});
  const NodeCounts counts = node_counts(sp);
  CHECK(counts.fvt == 5);
  CHECK(counts.lfvt == 2);
}

TEST_CASE("lfvt never needs more nodes than fvt") {
  for (std::uint64_t seed = 50; seed < 60; ++seed) {
    const auto inst = random_instance(seed, {.n_r = 10, .n_s = 120});
    const ReorganizedCollection sp = reorganize(inst.S);
    const NodeCounts counts = node_counts(sp);
    CHECK(counts.lfvt <= counts.fvt);
    CHECK(lfvt_flattening_matches_fvt(sp));
    CHECK(lfvt_entries_reconstruct(LfvtIndex::build(sp), sp));
  }
}

TEST_CASE("join over lfvt equals fvt and the oracle") {
  const auto inst = random_instance(77, {.n_r = 100, .n_s = 100});
  for (Coefficient coeff :
       {Coefficient::Jaccard, Coefficient::Cosine, Coefficient::Dice}) {
    const Threshold t = Threshold::parse("0.6");
    const auto via_lfvt = join_lfvt(inst.S, inst.R, coeff, t);
    const auto via_fvt = join_fvt(inst.S, inst.R, coeff, t);
    const auto expected = brute_force_join(inst.R, inst.S, coeff, t);
    CHECK(same_pairs(via_lfvt, via_fvt));
    CHECK(same_pairs(via_lfvt, expected));
  }
  const Threshold t3 = Threshold::parse("3");
  CHECK(same_pairs(join_lfvt(inst.S, inst.R, Coefficient::Overlap, t3),
                   brute_force_join(inst.R, inst.S, Coefficient::Overlap, t3)));
}

TEST_CASE("construction order does not change join results") {
  const auto inst = random_instance(78, {.n_r = 40, .n_s = 60});
  ReorganizedCollection sp = reorganize(inst.S);
  const Threshold t = Threshold::parse("0.5");

  const LfvtIndex in_order = LfvtIndex::build(sp);
  std::mt19937_64 rng(5);
  std::shuffle(sp.entries.begin(), sp.entries.end(), rng);
  const LfvtIndex shuffled = LfvtIndex::build(sp);

  for (const SetRecord& r : inst.R.records) {
    const ProbeResult a = in_order.probe(r, Coefficient::Jaccard, t);
    const ProbeResult b = shuffled.probe(r, Coefficient::Jaccard, t);
    CHECK(sorted_counts(a) == sorted_counts(b));
  }
}
