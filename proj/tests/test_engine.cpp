#include <doctest.h>

#include "ssjoin/engine.hpp"
#include "ssjoin/oracle.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace ssjoin;
using namespace ssjoin::testsupport;

namespace {

JobConfig base_config(const char* threshold = "0.6") {
  JobConfig cfg;
  cfg.coeff = Coefficient::Jaccard;
  cfg.t = Threshold::parse(threshold);
  return cfg;
}

}  // namespace

TEST_CASE("k=1 degenerates to the sequential join") {
  const auto inst = random_instance(61, {.n_r = 80, .n_s = 80});
  const auto expected =
      join_fvt(inst.S, inst.R, Coefficient::Jaccard, Threshold::parse("0.6"));
  for (Strategy strategy : {Strategy::LoadAware, Strategy::Hash}) {
    JobConfig cfg = base_config();
    cfg.k = 1;
    cfg.strategy = strategy;
    const JoinReport report = run_join(inst.R, inst.S, cfg);
    CHECK(same_pairs(report.pairs, expected));
  }
}

TEST_CASE("worked example under two partitions") {
  JobConfig cfg = base_config();
  cfg.k = 2;
  cfg.strategy = Strategy::LoadAware;
  const JoinReport report = run_join(example1_r(), example1_s(), cfg);
  REQUIRE(report.pairs.size() == 3);
  CHECK(report.pairs[0].r_index == 0);
  CHECK(report.pairs[0].s_index == 1);
  CHECK(report.pairs[1].r_index == 0);
  CHECK(report.pairs[1].s_index == 2);
  CHECK(report.pairs[2].r_index == 1);
  CHECK(report.pairs[2].s_index == 0);
}

TEST_CASE("distributed equals sequential equals oracle") {
  for (std::uint64_t seed : {71ull, 72ull}) {
    const auto inst = random_instance(seed, {.n_r = 90, .n_s = 90});
    for (const char* ts : {"0.5", "0.8"}) {
      const auto expected = brute_force_join(inst.R, inst.S,
                                             Coefficient::Jaccard,
                                             Threshold::parse(ts));
      for (std::uint32_t k : {2u, 4u, 8u}) {
        for (Strategy strategy : {Strategy::LoadAware, Strategy::Hash}) {
          for (IndexKind kind : {IndexKind::Fvt, IndexKind::Lfvt}) {
            JobConfig cfg = base_config(ts);
            cfg.k = k;
            cfg.strategy = strategy;
            cfg.index_kind = kind;
            const JoinReport report = run_join(inst.R, inst.S, cfg);
            CHECK(same_pairs(report.pairs, expected));
          }
        }
      }
    }
  }
}

TEST_CASE("map record accounting matches the closed forms") {
  const auto inst = random_instance(73, {.n_r = 70, .n_s = 60});
  const Threshold t = Threshold::parse("0.7");

  JobConfig cfg = base_config("0.7");
  cfg.k = 4;
  cfg.strategy = Strategy::LoadAware;
  const JoinReport la = run_join(inst.R, inst.S, cfg);
  std::uint64_t expected = inst.S.records.size();
  for (const SetRecord& r : inst.R.records)
    expected += route_r(la.plan, r, Coefficient::Jaccard, t).size();
  CHECK(la.map_records_emitted == expected);

  cfg.strategy = Strategy::Hash;
  const JoinReport ha = run_join(inst.R, inst.S, cfg);
  CHECK(ha.map_records_emitted ==
        cfg.k * inst.S.records.size() + inst.R.records.size());
}

TEST_CASE("reports are identical whatever the parallelism") {
  const auto inst = random_instance(74, {.n_r = 60, .n_s = 60});
  JobConfig cfg = base_config();
  cfg.k = 4;
  cfg.strategy = Strategy::LoadAware;
  cfg.index_kind = IndexKind::Lfvt;

  cfg.worker_parallelism = 1;
  const JoinReport serial = run_join(inst.R, inst.S, cfg);
  cfg.worker_parallelism = 4;
  const JoinReport parallel = run_join(inst.R, inst.S, cfg);

  CHECK(report_json(serial, cfg, true) == report_json(parallel, cfg, true));
  CHECK(pairs_text(serial.pairs) == pairs_text(parallel.pairs));
}

TEST_CASE("strategy comparison keeps pair sets equal") {
  const auto inst = random_instance(75, {.n_r = 80, .n_s = 80});
  JobConfig cfg = base_config();
  cfg.k = 4;
  const StrategyComparison cmp = compare_strategies(inst.R, inst.S, cfg);
  CHECK(same_pairs(cmp.load_aware.pairs, cmp.hash.pairs));
  // hash replicates all of S everywhere, so its shuffle volume dominates
  CHECK(cmp.load_aware.map_records_emitted <= cmp.hash.map_records_emitted);
}

TEST_CASE("uniform lengths collapse to one live partition") {
  std::vector<std::vector<ElementId>> sets;
  for (std::uint32_t i = 0; i < 40; ++i) sets.push_back({i});
  const Collection S = make_collection(CollectionTag::S, sets);
  const Collection R = make_collection(CollectionTag::R, sets);

  JobConfig cfg = base_config("1");
  cfg.k = 4;
  const StrategyComparison cmp = compare_strategies(R, S, cfg);

  std::uint32_t live = 0;
  for (const PartitionMetrics& pm : cmp.load_aware.per_partition)
    if (pm.s_records > 0) ++live;
  CHECK(live == 1);
  // but it avoids hash's k-fold S replication
  CHECK(cmp.load_aware.map_records_emitted <
        cmp.hash.map_records_emitted);
}

TEST_CASE("skewed lengths balance better than hash") {
  std::mt19937_64 rng(76);
  std::vector<std::vector<ElementId>> sets;
  for (std::uint32_t i = 0; i < 300; ++i) {
    // two far-apart size clusters
    const std::uint32_t size = (i % 10 == 0) ? 24 : 3;
    std::vector<ElementId> elements;
    std::uniform_int_distribution<std::uint32_t> val(0, 400);
    while (elements.size() < size) {
      const ElementId v = val(rng);
      if (std::find(elements.begin(), elements.end(), v) == elements.end())
        elements.push_back(v);
    }
    sets.push_back(std::move(elements));
  }
  const Collection S = make_collection(CollectionTag::S, sets);
  const Collection R = make_collection(CollectionTag::R, sets);

  JobConfig cfg = base_config("0.8");
  cfg.k = 4;
  const StrategyComparison cmp = compare_strategies(R, S, cfg);
  CHECK(cmp.load_aware.max_partition_elements <=
        cmp.hash.max_partition_elements);
}

TEST_CASE("k=1 strategies differ only by label") {
  const auto inst = random_instance(79, {.n_r = 40, .n_s = 40});
  JobConfig cfg = base_config();
  cfg.k = 1;
  const StrategyComparison cmp = compare_strategies(inst.R, inst.S, cfg);
  JobConfig la = cfg;
  la.strategy = Strategy::LoadAware;
  JobConfig ha = cfg;
  ha.strategy = Strategy::Hash;
  CHECK(report_json(cmp.load_aware, la, true, "either") ==
        report_json(cmp.hash, ha, true, "either"));
}

TEST_CASE("run_single matches run_join pairs and carries metrics") {
  const auto inst = random_instance(77, {.n_r = 50, .n_s = 50});
  JobConfig cfg = base_config();
  cfg.index_kind = IndexKind::Lfvt;
  const JoinReport single = run_single(inst.R, inst.S, cfg);
  cfg.k = 1;
  cfg.strategy = Strategy::LoadAware;
  const JoinReport distributed = run_join(inst.R, inst.S, cfg);
  CHECK(same_pairs(single.pairs, distributed.pairs));
  REQUIRE(single.per_partition.size() == 1);
  CHECK(single.per_partition[0].node_count > 0);
  CHECK(single.map_records_emitted == 0);
}

TEST_CASE("empty collections are handled") {
  const Collection empty_s = make_collection(CollectionTag::S, {});
  const auto inst = random_instance(78, {.n_r = 10, .n_s = 10});
  JobConfig cfg = base_config();
  cfg.k = 3;
  const JoinReport report = run_join(inst.R, empty_s, cfg);
  CHECK(report.pairs.empty());
  const JoinReport report2 = run_join(empty_s, inst.S, cfg);
  CHECK(report2.pairs.empty());
}
