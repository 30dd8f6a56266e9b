#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reachlab/eval.hpp"
#include "reachlab/run_config.hpp"

namespace reachlab {

struct SweepManifest {
  std::uint64_t global_seed = 1;
  int parallelism = 1;
  std::vector<RunConfig> runs;

  void validate() const;  // run ids must be unique
};

nlohmann::json to_json(const SweepManifest& m);
SweepManifest manifest_from_json(const nlohmann::json& j, const std::string& where);
SweepManifest load_manifest(const std::string& path);
void save_manifest(const SweepManifest& m, const std::string& path);

struct RunResult {
  std::string run_id;     // manifest id plus replicate suffix when replicated
  std::string config_id;  // manifest entry id
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RewardSpec reward;
  Metrics metrics;
  std::int64_t total_steps = 0;
  double final_mean_return = 0.0;
  double train_wall_s = 0.0;
  std::string checkpoint_path;
};

nlohmann::json to_json(const RunResult& r);
RunResult run_result_from_json(const nlohmann::json& j, const std::string& where);

struct SweepOptions {
  std::string out_root = "runs";
  int parallelism = 1;
  bool resume = false;
  int eval_episodes = 5;
  int eval_clicks = 10;
  bool export_csv = true;  // write evaluation trajectories per run
  std::ostream* progress = nullptr;
};

// Trains and evaluates every (run, replicate) job. Each job is isolated in
// out_root/<run_id>/ and its result.json is written as soon as it finishes,
// so an interrupted sweep resumes by skipping jobs with an ok result.
// Failures are recorded in their RunResult; they do not abort the sweep.
std::vector<RunResult> run_sweep(const SweepManifest& manifest, const SweepOptions& opt);

// Loads every result.json under out_root (one directory per run).
std::vector<RunResult> load_results(const std::string& out_root);

struct SummaryRow {
  std::string run_id;
  std::string effort;
  std::string distance;
  double bonus = 0.0;
  double w_effort = 0.0;
  double success_rate = 0.0;
  double mean_completion_time = 0.0;
  double mean_completion_time_success = 0.0;
  int n_trials = 0;
  bool ok = false;
};

// Fig-style summary table keyed by run id, sorted id-numerically.
std::vector<SummaryRow> summarize(std::span<const RunResult> results);
std::string summary_to_csv(std::span<const SummaryRow> rows);
std::vector<SummaryRow> summary_from_csv(const std::string& csv);

// Aggregation over (effort, distance, bonus presence) groups.
std::string summary_grouped_csv(std::span<const SummaryRow> rows);

}  // namespace reachlab
