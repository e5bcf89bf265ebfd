#include "ssjoin/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace ssjoin {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ms_since(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                            start)
          .count());
}

struct PartitionInput {
  std::vector<const SetRecord*> s_records;
  std::vector<const SetRecord*> r_records;
  std::uint64_t elements{0};
};

struct PartitionOutput {
  std::vector<ResultPair> pairs;
  std::uint64_t node_count{0};
  std::uint64_t build_ms{0};
  std::uint64_t probe_ms{0};
};

PartitionOutput reduce_partition(const PartitionInput& input,
                                 const JobConfig& cfg,
                                 std::uint32_t partition_index) {
  PartitionOutput out;
  try {
    const auto build_start = Clock::now();
    const ReorganizedCollection sp = reorganize_records(input.s_records);

    if (cfg.index_kind == IndexKind::Fvt) {
      const FvtIndex idx = FvtIndex::build(sp);
      out.node_count = idx.node_count();
      out.build_ms = ms_since(build_start);
      const auto probe_start = Clock::now();
      FvtProber prober(idx);
      for (const SetRecord* r : input.r_records)
        prober.probe_pairs(*r, cfg.coeff, cfg.t, cfg.probe, out.pairs);
      out.probe_ms = ms_since(probe_start);
    } else {
      const LfvtIndex idx = LfvtIndex::build(sp);
      out.node_count = idx.node_count();
      out.build_ms = ms_since(build_start);
      const auto probe_start = Clock::now();
      LfvtProber prober(idx);
      for (const SetRecord* r : input.r_records)
        prober.probe_pairs(*r, cfg.coeff, cfg.t, cfg.probe, out.pairs);
      out.probe_ms = ms_since(probe_start);
    }
  } catch (const CorruptionError& e) {
    throw CorruptionError("partition " + std::to_string(partition_index) +
                          ": " + e.what());
  }
  return out;
}

}  // namespace

const char* index_kind_name(IndexKind kind) {
  return kind == IndexKind::Fvt ? "fvt" : "lfvt";
}

JoinReport run_join(const Collection& R, const Collection& S,
                    const JobConfig& cfg) {
  cfg.t.require_valid_for(cfg.coeff);
  const auto wall_start = Clock::now();

  JoinReport report;
  report.plan = cfg.strategy == Strategy::LoadAware
                    ? optimal_partition(R.size_histogram, S.size_histogram,
                                        cfg.k, cfg.coeff, cfg.t)
                    : hash_partition(cfg.k);

  // Map phase: route records to partitions, counting emitted records.
  std::vector<PartitionInput> inputs(cfg.k);
  for (const SetRecord& s : S.records) {
    if (cfg.strategy == Strategy::LoadAware) {
      const std::uint32_t p = route_s(report.plan, s) - 1;
      inputs[p].s_records.push_back(&s);
      inputs[p].elements += s.size();
      report.map_records_emitted += 1;
    } else {
      for (std::uint32_t p = 0; p < cfg.k; ++p) {
        inputs[p].s_records.push_back(&s);
        inputs[p].elements += s.size();
      }
      report.map_records_emitted += cfg.k;
    }
  }
  for (const SetRecord& r : R.records) {
    if (cfg.strategy == Strategy::LoadAware) {
      for (std::uint32_t p : route_r(report.plan, r, cfg.coeff, cfg.t)) {
        inputs[p - 1].r_records.push_back(&r);
        inputs[p - 1].elements += r.size();
        report.map_records_emitted += 1;
      }
    } else {
      const std::uint32_t p = r.id.index % cfg.k;
      inputs[p].r_records.push_back(&r);
      inputs[p].elements += r.size();
      report.map_records_emitted += 1;
    }
  }

  // Reduce phase: each partition builds its own index and probes its share.
  std::vector<PartitionOutput> outputs(cfg.k);
  std::uint32_t workers = cfg.worker_parallelism;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.k);

  if (workers <= 1) {
    for (std::uint32_t p = 0; p < cfg.k; ++p)
      outputs[p] = reduce_partition(inputs[p], cfg, p + 1);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      while (true) {
        const std::uint32_t p = next.fetch_add(1);
        if (p >= cfg.k) return;
        try {
          outputs[p] = reduce_partition(inputs[p], cfg, p + 1);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::uint32_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Merge. Each pair can only arise in one partition (LoadAware: one home
  // per s; Hash: one home per r), so duplicates mean a routing bug.
  for (std::uint32_t p = 0; p < cfg.k; ++p) {
    report.pairs.insert(report.pairs.end(), outputs[p].pairs.begin(),
                        outputs[p].pairs.end());
    PartitionMetrics pm;
    pm.index = p + 1;
    pm.s_records = inputs[p].s_records.size();
    pm.r_records = inputs[p].r_records.size();
    pm.elements = inputs[p].elements;
    pm.node_count = outputs[p].node_count;
    pm.build_ms = outputs[p].build_ms;
    pm.probe_ms = outputs[p].probe_ms;
    report.per_partition.push_back(pm);
    report.max_partition_elements =
        std::max(report.max_partition_elements, inputs[p].elements);
  }
  std::sort(report.pairs.begin(), report.pairs.end());
  for (std::size_t i = 1; i < report.pairs.size(); ++i) {
    if (report.pairs[i - 1].r_index == report.pairs[i].r_index &&
        report.pairs[i - 1].s_index == report.pairs[i].s_index)
      throw CorruptionError("duplicate pair across partitions");
  }

  report.wall_ms = ms_since(wall_start);
  return report;
}

JoinReport run_single(const Collection& R, const Collection& S,
                      const JobConfig& cfg) {
  cfg.t.require_valid_for(cfg.coeff);
  const auto wall_start = Clock::now();

  PartitionInput input;
  input.s_records.reserve(S.records.size());
  for (const SetRecord& s : S.records) input.s_records.push_back(&s);
  input.r_records.reserve(R.records.size());
  for (const SetRecord& r : R.records) input.r_records.push_back(&r);
  input.elements = S.total_elements() + R.total_elements();

  PartitionOutput output = reduce_partition(input, cfg, 1);
  std::sort(output.pairs.begin(), output.pairs.end());

  JoinReport report;
  report.pairs = std::move(output.pairs);
  PartitionMetrics pm;
  pm.index = 1;
  pm.s_records = input.s_records.size();
  pm.r_records = input.r_records.size();
  pm.elements = input.elements;
  pm.node_count = output.node_count;
  pm.build_ms = output.build_ms;
  pm.probe_ms = output.probe_ms;
  report.per_partition.push_back(pm);
  report.max_partition_elements = input.elements;
  report.map_records_emitted = 0;  // no shuffle
  report.wall_ms = ms_since(wall_start);
  return report;
}

StrategyComparison compare_strategies(const Collection& R, const Collection& S,
                                      const JobConfig& cfg) {
  JobConfig la = cfg;
  la.strategy = Strategy::LoadAware;
  JobConfig ha = cfg;
  ha.strategy = Strategy::Hash;

  StrategyComparison cmp{run_join(R, S, la), run_join(R, S, ha)};
  if (!(cmp.load_aware.pairs == cmp.hash.pairs))
    throw CorruptionError("strategies disagree on the result pairs");
  return cmp;
}

std::string report_json(const JoinReport& report, const JobConfig& cfg,
                        bool zero_timings, const char* strategy_label) {
  nlohmann::ordered_json j;
  j["strategy"] = strategy_label ? strategy_label : strategy_name(cfg.strategy);
  j["index"] = index_kind_name(cfg.index_kind);
  j["coeff"] = coefficient_name(cfg.coeff);
  j["threshold"] = cfg.t.text;
  j["k"] = cfg.k;
  j["pairs"] = report.pairs.size();
  j["map_records_emitted"] = report.map_records_emitted;
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const PartitionMetrics& pm : report.per_partition) {
    nlohmann::ordered_json pj;
    pj["index"] = pm.index;
    pj["s_records"] = pm.s_records;
    pj["r_records"] = pm.r_records;
    pj["elements"] = pm.elements;
    pj["node_count"] = pm.node_count;
    pj["build_ms"] = zero_timings ? 0 : pm.build_ms;
    pj["probe_ms"] = zero_timings ? 0 : pm.probe_ms;
    parts.push_back(pj);
  }
  j["per_partition"] = parts;
  j["max_partition_elements"] = report.max_partition_elements;
  j["wall_ms"] = zero_timings ? 0 : report.wall_ms;
  return j.dump(2);
}

std::string pairs_text(const std::vector<ResultPair>& pairs) {
  std::ostringstream out;
  for (const ResultPair& p : pairs)
    out << 'R' << p.r_index << '\t' << 'S' << p.s_index << '\t'
        << p.score.decimal6() << '\n';
  return out.str();
}

void write_pairs(const std::vector<ResultPair>& pairs,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << pairs_text(pairs);
}

}  // namespace ssjoin
