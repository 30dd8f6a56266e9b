#include "reachlab/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "reachlab/checkpoint.hpp"
#include "reachlab/trainer.hpp"
#include "reachlab/trajectory.hpp"

namespace reachlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "2" < "10"; non-numeric ids fall back to lexicographic order.
bool id_less(const std::string& a, const std::string& b) {
  char* enda = nullptr;
  char* endb = nullptr;
  const long va = std::strtol(a.c_str(), &enda, 10);
  const long vb = std::strtol(b.c_str(), &endb, 10);
  const bool na = enda != a.c_str(), nb = endb != b.c_str();
  if (na && nb && va != vb) return va < vb;
  return a < b;
}

double json_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<double>();
}

}  // namespace

void SweepManifest::validate() const {
  if (parallelism < 1) throw std::invalid_argument("manifest: parallelism must be >= 1");
  std::set<std::string> ids;
  for (const RunConfig& r : runs) {
    r.validate();
    if (!ids.insert(r.id).second)
      throw std::invalid_argument("manifest: duplicate run id '" + r.id + "'");
  }
}

nlohmann::json to_json(const SweepManifest& m) {
  json runs = json::array();
  for (const RunConfig& r : m.runs) runs.push_back(to_json(r));
  return json{{"version", 1}, {"global_seed", m.global_seed}, {"parallelism", m.parallelism}, {"runs", runs}};
}

SweepManifest manifest_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": manifest must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "version" && key != "global_seed" && key != "parallelism" && key != "runs")
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
  SweepManifest m;
  if (j.contains("global_seed")) m.global_seed = j.at("global_seed").get<std::uint64_t>();
  if (j.contains("parallelism")) m.parallelism = j.at("parallelism").get<int>();
  if (j.contains("runs")) {
    if (!j.at("runs").is_array()) throw std::invalid_argument(where + ": runs must be an array");
    int idx = 0;
    for (const json& r : j.at("runs"))
      m.runs.push_back(run_config_from_json(r, where + ".runs[" + std::to_string(idx++) + "]"));
  }
  m.validate();
  return m;
}

SweepManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest: cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("manifest: " + path + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j, path);
}

void save_manifest(const SweepManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("manifest: cannot write " + path);
  out << to_json(m).dump(1) << "\n";
}

nlohmann::json to_json(const RunResult& r) {
  json m{{"success_rate", r.metrics.success_rate},
         {"mean_completion_time", r.metrics.mean_completion_time},
         {"mean_completion_time_success",
          std::isnan(r.metrics.mean_completion_time_success)
              ? json(nullptr)
              : json(r.metrics.mean_completion_time_success)},
         {"per_button_success", r.metrics.per_button_success},
         {"per_button_trials", r.metrics.per_button_trials},
         {"n_trials", r.metrics.n_trials},
         {"successes", r.metrics.successes}};
  return json{{"run_id", r.run_id},
              {"config_id", r.config_id},
              {"seed", r.seed},
              {"ok", r.ok},
              {"error", r.error},
              {"reward", to_json(r.reward)},
              {"metrics", m},
              {"total_steps", r.total_steps},
              {"final_mean_return",
               std::isnan(r.final_mean_return) ? json(nullptr) : json(r.final_mean_return)},
              {"train_wall_s", r.train_wall_s},
              {"checkpoint", r.checkpoint_path}};
}

RunResult run_result_from_json(const json& j, const std::string& where) {
  RunResult r;
  try {
    r.run_id = j.at("run_id").get<std::string>();
    r.config_id = j.value("config_id", r.run_id);
    r.seed = j.at("seed").get<std::uint64_t>();
    r.ok = j.at("ok").get<bool>();
    r.error = j.value("error", "");
    if (j.contains("reward")) r.reward = reward_spec_from_json(j.at("reward"), where + ".reward");
    if (j.contains("metrics")) {
      const json& m = j.at("metrics");
      r.metrics.success_rate = json_num(m, "success_rate", 0.0);
      r.metrics.mean_completion_time = json_num(m, "mean_completion_time", 0.0);
      r.metrics.mean_completion_time_success =
          json_num(m, "mean_completion_time_success", std::numeric_limits<double>::quiet_NaN());
      if (m.contains("per_button_success"))
        r.metrics.per_button_success = m.at("per_button_success").get<std::array<double, kNumButtons>>();
      if (m.contains("per_button_trials"))
        r.metrics.per_button_trials = m.at("per_button_trials").get<std::array<int, kNumButtons>>();
      r.metrics.n_trials = m.value("n_trials", 0);
      r.metrics.successes = m.value("successes", 0);
    }
    r.total_steps = j.value("total_steps", static_cast<std::int64_t>(0));
    r.final_mean_return = json_num(j, "final_mean_return", std::numeric_limits<double>::quiet_NaN());
    r.train_wall_s = j.value("train_wall_s", 0.0);
    r.checkpoint_path = j.value("checkpoint", "");
  } catch (const json::exception& e) {
    throw std::runtime_error(where + ": bad result record: " + e.what());
  }
  return r;
}

namespace {

struct Job {
  RunConfig cfg;
  std::string run_id;
  std::uint64_t seed = 0;
};

RunResult execute_job(const Job& job, const SweepOptions& opt) {
  RunResult res;
  res.run_id = job.run_id;
  res.config_id = job.cfg.id;
  res.seed = job.seed;
  res.reward = job.cfg.reward;

  const std::string run_dir = opt.out_root + "/" + job.run_id;
  fs::create_directories(run_dir);
  try {
    TrainConfig tc = job.cfg.train;
    tc.seed = job.seed;
    const EnvParams env_params = job.cfg.env;
    const auto t0 = std::chrono::steady_clock::now();
    TrainResult trained = train([env_params]() { return ChoiceReactionEnv(env_params); },
                                job.cfg.reward, job.cfg.normalizer, tc, run_dir);
    res.train_wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.total_steps = tc.num_updates() * tc.rollout_length;
    res.final_mean_return = std::numeric_limits<double>::quiet_NaN();
    for (auto it = trained.log.updates.rbegin(); it != trained.log.updates.rend(); ++it) {
      if (!std::isnan(it->mean_return)) {
        res.final_mean_return = it->mean_return;
        break;
      }
    }
    const EvalResult ev = evaluate(trained.params, job.cfg.reward, job.cfg.normalizer, env_params,
                                   opt.eval_episodes, opt.eval_clicks, Rng::derive(job.seed, 0xE7AB));
    res.metrics = ev.metrics;
    if (opt.export_csv) export_trajectories(ev.episodes, run_dir + "/trajectories");
    res.checkpoint_path = run_dir + "/checkpoint_final.json";
    res.ok = true;
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
  }
  std::ofstream out(run_dir + "/result.json");
  out << to_json(res).dump(1) << "\n";
  return res;
}

}  // namespace

std::vector<RunResult> run_sweep(const SweepManifest& manifest, const SweepOptions& opt) {
  manifest.validate();
  std::vector<Job> jobs;
  for (const RunConfig& r : manifest.runs) {
    for (int k = 0; k < r.replicates; ++k) {
      Job job;
      job.cfg = r;
      job.run_id = r.replicates == 1 ? r.id : r.id + "-r" + std::to_string(k);
      job.seed = run_seed(manifest.global_seed, job.run_id);
      jobs.push_back(std::move(job));
    }
  }

  std::vector<RunResult> results(jobs.size());
  std::vector<std::uint8_t> have(jobs.size(), 0);
  fs::create_directories(opt.out_root);

  if (opt.resume) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const std::string path = opt.out_root + "/" + jobs[i].run_id + "/result.json";
      std::ifstream in(path);
      if (!in) continue;
      try {
        json j;
        in >> j;
        RunResult r = run_result_from_json(j, path);
        if (r.ok) {  // failed runs re-execute
          results[i] = std::move(r);
          have[i] = 1;
        }
      } catch (const std::exception&) {
        // unreadable result: re-run
      }
    }
  }

  std::mutex mu;
  std::size_t next = 0;
  const int workers = std::max(1, std::min<int>(opt.parallelism, static_cast<int>(jobs.size())));
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        while (next < jobs.size() && have[next]) {
          if (opt.progress)
            (*opt.progress) << "[sweep] " << jobs[next].run_id << ": resumed\n" << std::flush;
          ++next;
        }
        if (next >= jobs.size()) return;
        i = next++;
        if (opt.progress) (*opt.progress) << "[sweep] " << jobs[i].run_id << ": start\n" << std::flush;
      }
      RunResult r = execute_job(jobs[i], opt);
      {
        std::lock_guard<std::mutex> lock(mu);
        if (opt.progress) {
          if (r.ok)
            (*opt.progress) << "[sweep] " << r.run_id << ": done, success_rate="
                            << r.metrics.success_rate << ", mean_time=" << r.metrics.mean_completion_time
                            << " (" << static_cast<int>(r.train_wall_s) << " s)\n"
                            << std::flush;
          else
            (*opt.progress) << "[sweep] " << r.run_id << ": FAILED: " << r.error << "\n" << std::flush;
        }
        results[i] = std::move(r);
        have[i] = 1;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return results;
}

std::vector<RunResult> load_results(const std::string& out_root) {
  std::vector<RunResult> results;
  if (!fs::is_directory(out_root)) throw std::runtime_error("results: no directory " + out_root);
  for (const auto& entry : fs::directory_iterator(out_root)) {
    if (!entry.is_directory()) continue;
    const std::string path = entry.path().string() + "/result.json";
    std::ifstream in(path);
    if (!in) continue;
    json j;
    try {
      in >> j;
      results.push_back(run_result_from_json(j, path));
    } catch (const std::exception&) {
      // skip unreadable entries
    }
  }
  std::sort(results.begin(), results.end(),
            [](const RunResult& a, const RunResult& b) { return id_less(a.run_id, b.run_id); });
  return results;
}

std::vector<SummaryRow> summarize(std::span<const RunResult> results) {
  if (results.empty()) throw std::invalid_argument("summarize: no results");
  std::vector<SummaryRow> rows;
  rows.reserve(results.size());
  for (const RunResult& r : results) {
    SummaryRow row;
    row.run_id = r.run_id;
    row.effort = to_string(r.reward.effort);
    row.distance = to_string(r.reward.distance);
    row.bonus = r.reward.bonus_b;
    row.w_effort = r.reward.w_effort;
    row.success_rate = r.metrics.success_rate;
    row.mean_completion_time = r.metrics.mean_completion_time;
    row.mean_completion_time_success = r.metrics.mean_completion_time_success;
    row.n_trials = r.metrics.n_trials;
    row.ok = r.ok;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return id_less(a.run_id, b.run_id); });
  return rows;
}

std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "run_id,effort,distance,bonus,w_effort,success_rate,mean_completion_time,"
         "mean_completion_time_success,n_trials,ok\n";
  for (const SummaryRow& r : rows) {
    out << r.run_id << ',' << r.effort << ',' << r.distance << ',' << fmt(r.bonus) << ','
        << fmt(r.w_effort) << ',' << fmt(r.success_rate) << ',' << fmt(r.mean_completion_time) << ','
        << fmt(r.mean_completion_time_success) << ',' << r.n_trials << ',' << (r.ok ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<SummaryRow> summary_from_csv(const std::string& csv) {
  std::vector<SummaryRow> rows;
  std::stringstream ss(csv);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 10) throw std::invalid_argument("summary: malformed row '" + line + "'");
    SummaryRow r;
    r.run_id = cells[0];
    r.effort = cells[1];
    r.distance = cells[2];
    r.bonus = std::strtod(cells[3].c_str(), nullptr);
    r.w_effort = std::strtod(cells[4].c_str(), nullptr);
    r.success_rate = std::strtod(cells[5].c_str(), nullptr);
    r.mean_completion_time = std::strtod(cells[6].c_str(), nullptr);
    r.mean_completion_time_success = std::strtod(cells[7].c_str(), nullptr);
    r.n_trials = static_cast<int>(std::strtol(cells[8].c_str(), nullptr, 10));
    r.ok = cells[9] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary_grouped_csv(std::span<const SummaryRow> rows) {
  struct Agg {
    double success = 0.0, time = 0.0;
    int n = 0;
  };
  std::map<std::tuple<std::string, std::string, bool>, Agg> groups;
  for (const SummaryRow& r : rows) {
    Agg& a = groups[{r.effort, r.distance, r.bonus > 0.0}];
    a.success += r.success_rate;
    a.time += r.mean_completion_time;
    ++a.n;
  }
  std::ostringstream out;
  out << "effort,distance,with_bonus,runs,mean_success_rate,mean_completion_time\n";
  for (const auto& [key, a] : groups) {
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << (std::get<2>(key) ? 1 : 0) << ','
        << a.n << ',' << fmt(a.success / a.n) << ',' << fmt(a.time / a.n) << '\n';
  }
  return out.str();
}

}  // namespace reachlab
