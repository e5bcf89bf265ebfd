#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssjoin/fvt.hpp"
#include "ssjoin/ingest.hpp"
#include "ssjoin/lfvt.hpp"
#include "ssjoin/model.hpp"
#include "ssjoin/planner.hpp"

namespace ssjoin {

enum class IndexKind { Fvt, Lfvt };

const char* index_kind_name(IndexKind kind);

struct JobConfig {
  std::uint32_t k{1};
  IndexKind index_kind{IndexKind::Fvt};
  Strategy strategy{Strategy::LoadAware};
  Coefficient coeff{Coefficient::Jaccard};
  Threshold t;
  // max partitions joined concurrently; 0 means hardware concurrency
  std::uint32_t worker_parallelism{0};
  ProbeOptions probe;
};

struct PartitionMetrics {
  std::uint32_t index{1};
  std::uint64_t s_records{0};
  std::uint64_t r_records{0};
  std::uint64_t elements{0};  // sum of |s| and |r| routed here
  std::uint64_t node_count{0};
  std::uint64_t build_ms{0};
  std::uint64_t probe_ms{0};
};

struct JoinReport {
  std::vector<ResultPair> pairs;  // sorted by (r, s), duplicate-free
  std::uint64_t map_records_emitted{0};
  std::vector<PartitionMetrics> per_partition;
  std::uint64_t max_partition_elements{0};
  std::uint64_t wall_ms{0};
  PartitionPlan plan;
};

// One map/shuffle/reduce round: plan, route both collections, build and
// probe a local index per partition, merge. Byte-identical output for a
// given input and config, whatever the parallelism.
JoinReport run_join(const Collection& R, const Collection& S,
                    const JobConfig& cfg);

// Sequential join without the map/reduce machinery: one index over all of S,
// probed by all of R. Ignores cfg.k and cfg.strategy.
JoinReport run_single(const Collection& R, const Collection& S,
                      const JobConfig& cfg);

struct StrategyComparison {
  JoinReport load_aware;
  JoinReport hash;
};

// Runs both partitioning strategies with otherwise identical config and
// checks they produce the same pairs.
StrategyComparison compare_strategies(const Collection& R, const Collection& S,
                                      const JobConfig& cfg);

// Serialized metrics (timing fields vary run to run; everything else is a
// pure function of input and config). strategy_label overrides the config's
// strategy name, e.g. "single".
std::string report_json(const JoinReport& report, const JobConfig& cfg,
                        bool zero_timings = false,
                        const char* strategy_label = nullptr);

void write_pairs(const std::vector<ResultPair>& pairs,
                 const std::string& path);
std::string pairs_text(const std::vector<ResultPair>& pairs);

}  // namespace ssjoin
