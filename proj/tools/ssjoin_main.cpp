#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssjoin/engine.hpp"
#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"
#include "ssjoin/oracle.hpp"
#include "ssjoin/planner.hpp"

namespace {

using namespace ssjoin;

struct CommonArgs {
  std::string r_path;
  std::string s_path;
  std::string threshold{"0.5"};
  std::string coeff{"jaccard"};
  std::uint64_t seed{0};
  std::string sample{"1"};
};

Coefficient coeff_of(const std::string& name) {
  auto c = parse_coefficient(name);
  if (!c) throw ParseError("unknown coefficient '" + name + "'");
  return *c;
}

LoadOptions load_options(const CommonArgs& args) {
  LoadOptions opt;
  Threshold f = Threshold::parse(args.sample);
  if (f.num > f.den) throw ParseError("--sample must be in [0, 1]");
  opt.sample_fraction = Rational{f.num, f.den};
  opt.seed = args.seed;
  return opt;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

int cmd_join(const CommonArgs& common, const std::string& index,
             std::uint32_t workers, const std::string& strategy,
             const std::string& out_path, const std::string& metrics_path,
             bool no_early_stop, std::uint32_t parallelism) {
  const Coefficient coeff = coeff_of(common.coeff);
  const Threshold t = Threshold::parse(common.threshold);
  t.require_valid_for(coeff);

  const LoadOptions opts = load_options(common);
  const Collection R = load_collection(common.r_path, CollectionTag::R, opts);
  const Collection S = load_collection(common.s_path, CollectionTag::S, opts);

  JobConfig cfg;
  cfg.k = workers;
  cfg.index_kind = index == "lfvt" ? IndexKind::Lfvt : IndexKind::Fvt;
  cfg.coeff = coeff;
  cfg.t = t;
  cfg.worker_parallelism = parallelism;
  cfg.probe.early_stop = !no_early_stop;
  if (index != "fvt" && index != "lfvt")
    throw ParseError("unknown index '" + index + "'");

  if (strategy == "single") {
    cfg.k = 1;
    const JoinReport report = run_single(R, S, cfg);
    emit(pairs_text(report.pairs), out_path);
    if (!metrics_path.empty())
      emit(report_json(report, cfg, false, "single"), metrics_path);
    return 0;
  }

  if (strategy == "load-aware")
    cfg.strategy = Strategy::LoadAware;
  else if (strategy == "hash")
    cfg.strategy = Strategy::Hash;
  else
    throw ParseError("unknown strategy '" + strategy + "'");

  const JoinReport report = run_join(R, S, cfg);
  emit(pairs_text(report.pairs), out_path);
  if (!metrics_path.empty()) emit(report_json(report, cfg, false), metrics_path);
  return 0;
}

int cmd_plan(const CommonArgs& common, std::uint32_t k) {
  const Coefficient coeff = coeff_of(common.coeff);
  const Threshold t = Threshold::parse(common.threshold);
  t.require_valid_for(coeff);
  const LoadOptions opts = load_options(common);
  const Collection R = load_collection(common.r_path, CollectionTag::R, opts);
  const Collection S = load_collection(common.s_path, CollectionTag::S, opts);
  const PartitionPlan plan =
      optimal_partition(R.size_histogram, S.size_histogram, k, coeff, t);
  std::cout << plan_json(plan) << '\n';
  return 0;
}

int cmd_stats(const std::string& path) {
  const Collection c = load_collection(path, CollectionTag::S, {});
  std::cout << stats_json(stats(c)) << '\n';
  return 0;
}

int cmd_verify(const CommonArgs& common, const std::string& candidate_path) {
  const Coefficient coeff = coeff_of(common.coeff);
  const Threshold t = Threshold::parse(common.threshold);
  t.require_valid_for(coeff);
  const LoadOptions opts = load_options(common);
  const Collection R = load_collection(common.r_path, CollectionTag::R, opts);
  const Collection S = load_collection(common.s_path, CollectionTag::S, opts);

  // Parse `R<r>\tS<s>\t<score>` lines back into pairs.
  std::ifstream in(candidate_path);
  if (!in) throw ParseError("cannot open '" + candidate_path + "'");
  struct CandidateLine {
    std::uint32_t r_index;
    std::uint32_t s_index;
    std::string score;
  };
  std::vector<CandidateLine> candidate;
  std::string line;
  std::size_t line_no = 0;
  auto parse_id = [&](const std::string& field, char prefix) {
    if (field.size() < 2 || field[0] != prefix ||
        field.find_first_not_of("0123456789", 1) != std::string::npos)
      throw ParseError("candidate line " + std::to_string(line_no) +
                       ": expected R<id>\tS<id>\t<score>");
    return static_cast<std::uint32_t>(std::stoul(field.substr(1)));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string rf, sf, score;
    if (!(fields >> rf >> sf >> score))
      throw ParseError("candidate line " + std::to_string(line_no) +
                       ": expected R<id>\tS<id>\t<score>");
    candidate.push_back(
        CandidateLine{parse_id(rf, 'R'), parse_id(sf, 'S'), score});
  }
  std::sort(candidate.begin(), candidate.end(),
            [](const CandidateLine& a, const CandidateLine& b) {
              if (a.r_index != b.r_index) return a.r_index < b.r_index;
              return a.s_index < b.s_index;
            });

  const std::vector<ResultPair> expected = brute_force_join(R, S, coeff, t);
  nlohmann::ordered_json diff;
  diff["missing"] = nlohmann::ordered_json::array();
  diff["extra"] = nlohmann::ordered_json::array();
  diff["score_mismatches"] = nlohmann::ordered_json::array();

  bool clean = true;
  auto pair_key = [](std::uint32_t r, std::uint32_t s) {
    return (static_cast<std::uint64_t>(r) << 32) | s;
  };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < expected.size() || j < candidate.size()) {
    const std::uint64_t ek =
        i < expected.size()
            ? pair_key(expected[i].r_index, expected[i].s_index)
            : ~0ULL;
    const std::uint64_t ck =
        j < candidate.size()
            ? pair_key(candidate[j].r_index, candidate[j].s_index)
            : ~0ULL;
    if (ek < ck) {
      diff["missing"].push_back("R" + std::to_string(expected[i].r_index) +
                                " S" + std::to_string(expected[i].s_index));
      clean = false;
      ++i;
    } else if (ck < ek) {
      diff["extra"].push_back("R" + std::to_string(candidate[j].r_index) +
                              " S" + std::to_string(candidate[j].s_index));
      clean = false;
      ++j;
    } else {
      if (candidate[j].score != expected[i].score.decimal6()) {
        diff["score_mismatches"].push_back(
            "R" + std::to_string(expected[i].r_index) + " S" +
            std::to_string(expected[i].s_index) + " expected " +
            expected[i].score.decimal6() + " got " + candidate[j].score);
        clean = false;
      }
      ++i;
      ++j;
    }
  }
  std::cout << diff.dump(2) << '\n';
  return clean ? 0 : 1;
}

int cmd_bench(const CommonArgs& common, const std::string& dataset,
              const std::vector<std::string>& thresholds,
              const std::vector<std::string>& indexes,
              const std::vector<std::string>& strategies, std::uint32_t k,
              const std::string& out_path) {
  std::ostringstream csv;
  csv << "dataset,t,coeff,index,strategy,k,wall_ms,map_records,"
         "max_partition_elements,index_nodes\n";

  if (!thresholds.empty()) {
    const Coefficient coeff = coeff_of(common.coeff);
    const LoadOptions opts = load_options(common);
    const Collection R =
        load_collection(common.r_path, CollectionTag::R, opts);
    const Collection S =
        load_collection(common.s_path, CollectionTag::S, opts);
    std::string name = dataset;
    if (name.empty()) {
      name = common.s_path;
      if (auto pos = name.find_last_of('/'); pos != std::string::npos)
        name = name.substr(pos + 1);
    }

    for (const std::string& ts : thresholds) {
      const Threshold t = Threshold::parse(ts);
      t.require_valid_for(coeff);
      for (const std::string& index : indexes) {
        for (const std::string& strategy : strategies) {
          JobConfig cfg;
          cfg.k = k;
          cfg.index_kind = index == "lfvt" ? IndexKind::Lfvt : IndexKind::Fvt;
          cfg.strategy = strategy == "hash" ? Strategy::Hash
                                            : Strategy::LoadAware;
          cfg.coeff = coeff;
          cfg.t = t;
          const JoinReport report = run_join(R, S, cfg);
          std::uint64_t nodes = 0;
          for (const PartitionMetrics& pm : report.per_partition)
            nodes += pm.node_count;
          csv << name << ',' << ts << ',' << common.coeff << ',' << index
              << ',' << strategy << ',' << k << ',' << report.wall_ms << ','
              << report.map_records_emitted << ','
              << report.max_partition_elements << ',' << nodes << '\n';
        }
      }
    }
  }
  emit(csv.str(), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact R-S set similarity joins over filter-and-verification "
               "trees"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string index{"fvt"};
  std::string strategy{"single"};
  std::uint32_t workers = 1;
  std::uint32_t parallelism = 0;
  std::string out_path;
  std::string metrics_path;
  bool no_early_stop = false;
  std::uint32_t k = 1;
  std::string stats_path;
  std::string candidate_path;
  std::string dataset;
  std::vector<std::string> thresholds;
  std::vector<std::string> indexes{"fvt", "lfvt"};
  std::vector<std::string> strategies{"load-aware"};

  auto add_common = [&](CLI::App* cmd, bool need_threshold) {
    cmd->add_option("--r", common.r_path, "R collection file")->required();
    cmd->add_option("--s", common.s_path, "S collection file")->required();
    auto* t = cmd->add_option("--threshold", common.threshold,
                              "similarity threshold, e.g. 0.6");
    if (need_threshold) t->required();
    cmd->add_option("--coeff", common.coeff,
                    "jaccard | overlap | cosine | dice");
    cmd->add_option("--seed", common.seed, "sampling seed");
    cmd->add_option("--sample", common.sample, "keep fraction, e.g. 0.5");
  };

  CLI::App* join = app.add_subcommand("join", "run an R-S similarity join");
  add_common(join, true);
  join->add_option("--index", index, "fvt | lfvt");
  join->add_option("--workers", workers, "partition count k")
      ->check(CLI::PositiveNumber);
  join->add_option("--strategy", strategy, "load-aware | hash | single");
  join->add_option("--out", out_path, "result file (default stdout)");
  join->add_option("--metrics", metrics_path, "metrics JSON file");
  join->add_flag("--no-early-stop", no_early_stop,
                 "walk past the upper length bound (diagnostics)");
  join->add_option("--parallelism", parallelism,
                   "max concurrent partitions (default: hardware)");

  CLI::App* plan = app.add_subcommand("plan", "print the partition plan");
  add_common(plan, true);
  plan->add_option("--k", k, "partition count")->check(CLI::PositiveNumber);

  CLI::App* stats_cmd =
      app.add_subcommand("stats", "dataset statistics as JSON");
  stats_cmd->add_option("path", stats_path, "collection file")->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "diff a result file against the brute-force reference");
  add_common(verify, true);
  verify->add_option("--candidate", candidate_path, "result file to check")
      ->required();

  CLI::App* bench =
      app.add_subcommand("bench", "sweep thresholds/indexes, emit CSV");
  add_common(bench, false);
  bench->add_option("--dataset", dataset, "dataset label for the CSV");
  bench->add_option("--thresholds", thresholds, "threshold sweep")
      ->delimiter(',');
  bench->add_option("--indexes", indexes, "index sweep")->delimiter(',');
  bench->add_option("--strategies", strategies, "strategy sweep")
      ->delimiter(',');
  bench->add_option("--k", k, "partition count")->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (app.got_subcommand(join))
      return cmd_join(common, index, workers, strategy, out_path,
                      metrics_path, no_early_stop, parallelism);
    if (app.got_subcommand(plan)) return cmd_plan(common, k);
    if (app.got_subcommand(stats_cmd)) return cmd_stats(stats_path);
    if (app.got_subcommand(verify)) return cmd_verify(common, candidate_path);
    if (app.got_subcommand(bench))
      return cmd_bench(common, dataset, thresholds, indexes, strategies, k,
                       out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
