// reachlab command line: train, evaluate and sweep reward configurations for
// the muscle-arm choice reaction task.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "reachlab/checkpoint.hpp"
#include "reachlab/presets.hpp"
#include "reachlab/sweep.hpp"
#include "reachlab/trainer.hpp"
#include "reachlab/trajectory.hpp"

using namespace reachlab;

namespace {

std::string output_root() {
  if (const char* env = std::getenv("REACHLAB_OUT"); env != nullptr && *env != '\0') return env;
  return "runs";
}

RunConfig config_from_args(const std::string& config_path, int grid_id) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config " + config_path);
    nlohmann::json j;
    in >> j;
    return run_config_from_json(j, config_path);
  }
  RunConfig r;
  r.id = std::to_string(grid_id);
  r.reward = reward_grid_entry(grid_id);
  return r;
}

int cmd_train(const std::string& config_path, int grid_id, std::int64_t steps_override,
              std::uint64_t seed, bool seed_set) {
  RunConfig cfg = config_from_args(config_path, grid_id);
  if (steps_override > 0) cfg.train.total_steps = steps_override;
  if (seed_set) cfg.train.seed = seed;
  const std::string run_dir = output_root() + "/" + cfg.id;
  std::filesystem::create_directories(run_dir);

  std::cout << "training '" << cfg.id << "': effort=" << to_string(cfg.reward.effort)
            << " distance=" << to_string(cfg.reward.distance) << " bonus=" << cfg.reward.bonus_b
            << " steps=" << cfg.train.total_steps << "\n";
  const EnvParams env = cfg.env;
  const TrainResult res =
      train([env]() { return ChoiceReactionEnv(env); }, cfg.reward, cfg.normalizer, cfg.train, run_dir);
  std::cout << "checkpoints written under " << run_dir << "\n";
  const auto& last = res.log.updates.back();
  std::cout << "final update: step=" << last.step << " mean_return=" << last.mean_return
            << " successes_in_window=" << last.success_count << "\n";
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, int episodes, int clicks, std::uint64_t seed,
                 const std::string& export_dir, bool svg) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const EvalResult res =
      evaluate(ck.policy, ck.reward, ck.normalizer, ck.env, episodes, clicks, seed);
  const Metrics& m = res.metrics;
  std::cout << "episodes=" << episodes << " clicks=" << clicks << " n_trials=" << m.n_trials << "\n"
            << "success_rate=" << m.success_rate << "\n"
            << "mean_completion_time=" << m.mean_completion_time << " s (timeouts at cap)\n"
            << "mean_completion_time_success=" << m.mean_completion_time_success << " s\n";
  for (int b = 0; b < kNumButtons; ++b)
    std::cout << "button_" << b << ": trials=" << m.per_button_trials[static_cast<std::size_t>(b)]
              << " success=" << m.per_button_success[static_cast<std::size_t>(b)] << "\n";
  if (!export_dir.empty()) {
    export_trajectories(res.episodes, export_dir, svg);
    std::cout << "trajectories written to " << export_dir << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& manifest_path, int parallel, bool resume, int episodes, int clicks) {
  const SweepManifest manifest = load_manifest(manifest_path);
  SweepOptions opt;
  opt.out_root = output_root();
  opt.parallelism = parallel > 0 ? parallel : manifest.parallelism;
  opt.resume = resume;
  opt.eval_episodes = episodes;
  opt.eval_clicks = clicks;
  opt.progress = &std::cout;
  const auto results = run_sweep(manifest, opt);
  int failed = 0;
  for (const RunResult& r : results)
    if (!r.ok) ++failed;
  if (!results.empty()) {
    const auto rows = summarize(results);
    std::cout << summary_to_csv(rows);
  }
  if (failed > 0) {
    std::cerr << failed << " of " << results.size() << " runs failed\n";
    return 1;
  }
  return 0;
}

int cmd_summarize(const std::string& results_dir, bool grouped) {
  const auto results = load_results(results_dir.empty() ? output_root() : results_dir);
  const auto rows = summarize(results);
  std::cout << summary_to_csv(rows);
  if (grouped) std::cout << "\n" << summary_grouped_csv(rows);
  return 0;
}

int cmd_export(const std::string& run_id, int episodes, int clicks, std::uint64_t seed, bool svg) {
  const std::string run_dir = output_root() + "/" + run_id;
  const Checkpoint ck = load_checkpoint(run_dir + "/checkpoint_final.json");
  const EvalResult res = evaluate(ck.policy, ck.reward, ck.normalizer, ck.env, episodes, clicks, seed);
  const std::string dir = run_dir + "/trajectories";
  export_trajectories(res.episodes, dir, svg);
  std::cout << "wrote " << res.episodes.size() << " episode files to " << dir
            << " (success_rate=" << res.metrics.success_rate << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muscle-arm choice reaction lab: reward design experiments"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train one policy from a config file or a grid id");
  std::string config_path;
  int grid_id = 0;
  std::int64_t steps_override = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  auto* config_opt = train_cmd->add_option("--config", config_path, "run config JSON");
  auto* id_opt = train_cmd->add_option("--id", grid_id, "bundled grid id (1..60)")->check(CLI::Range(1, 60));
  train_cmd->add_option("--steps", steps_override, "override total training steps");
  train_cmd->add_option("--seed", seed, "override training seed")->each([&seed_set](const std::string&) { seed_set = true; });
  config_opt->excludes(id_opt);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint");
  std::string checkpoint_path, export_dir;
  int episodes = 5, clicks = 10;
  std::uint64_t eval_seed = 0;
  bool svg = false;
  eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
  eval_cmd->add_option("--episodes", episodes, "evaluation episodes");
  eval_cmd->add_option("--clicks", clicks, "required clicks per episode");
  eval_cmd->add_option("--seed", eval_seed, "evaluation seed");
  eval_cmd->add_option("--export", export_dir, "also write trajectory CSVs here");
  eval_cmd->add_flag("--svg", svg, "write fingertip-path SVGs next to the CSVs");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "train and evaluate every manifest entry");
  std::string manifest_path;
  int parallel = 0;
  bool resume = false;
  sweep_cmd->add_option("--manifest", manifest_path, "sweep manifest JSON")->required();
  sweep_cmd->add_option("--parallel", parallel, "worker count (default: manifest setting)");
  sweep_cmd->add_flag("--resume", resume, "skip runs with a completed result.json");
  sweep_cmd->add_option("--episodes", episodes, "evaluation episodes per run");
  sweep_cmd->add_option("--clicks", clicks, "required clicks per evaluation episode");

  // summarize
  auto* sum_cmd = app.add_subcommand("summarize", "tabulate results from a sweep directory");
  std::string results_dir;
  bool grouped = false;
  sum_cmd->add_option("--results", results_dir, "results root (default: output root)");
  sum_cmd->add_flag("--group", grouped, "append aggregation by effort/distance/bonus presence");

  // export
  auto* export_cmd = app.add_subcommand("export", "re-export evaluation trajectories for a run");
  std::string run_id;
  export_cmd->add_option("--run", run_id, "run id under the output root")->required();
  export_cmd->add_option("--episodes", episodes, "evaluation episodes");
  export_cmd->add_option("--clicks", clicks, "required clicks per episode");
  export_cmd->add_option("--seed", eval_seed, "evaluation seed");
  export_cmd->add_flag("--svg", svg, "also write fingertip-path SVGs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      if (config_path.empty() && grid_id == 0)
        throw std::runtime_error("train needs --config or --id");
      return cmd_train(config_path, grid_id, steps_override, seed, seed_set);
    }
    if (eval_cmd->parsed())
      return cmd_evaluate(checkpoint_path, episodes, clicks, eval_seed, export_dir, svg);
    if (sweep_cmd->parsed()) return cmd_sweep(manifest_path, parallel, resume, episodes, clicks);
    if (sum_cmd->parsed()) return cmd_summarize(results_dir, grouped);
    if (export_cmd->parsed()) return cmd_export(run_id, episodes, clicks, eval_seed, svg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
