#include "reachlab/trajectory.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reachlab {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StepStatus status_from_string(const std::string& s) {
  if (s == "running") return StepStatus::running;
  if (s == "trial_success") return StepStatus::trial_success;
  if (s == "trial_timeout") return StepStatus::trial_timeout;
  if (s == "episode_done") return StepStatus::episode_done;
  throw std::invalid_argument("trajectory: unknown status '" + s + "'");
}

constexpr const char* kHeader =
    "t,q1,q2,qdot1,qdot2,act1,act2,act3,act4,act5,act6,u1,u2,u3,u4,u5,u6,"
    "tip_x,tip_y,dist,target,pressed_correct,pressed_wrong,"
    "bonus_term,distance_term,effort_term,reward_total,status,"
    "trial_outcome,trial_duration";

std::string episode_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "episode_%03zu.csv", index);
  return buf;
}

}  // namespace

void export_trajectories(std::span<const EpisodeLog> episodes, const std::string& dir, bool svg) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("trajectory: cannot create directory " + dir);

  for (std::size_t e = 0; e < episodes.size(); ++e) {
    const EpisodeLog& ep = episodes[e];
    const std::string path = dir + "/" + episode_filename(e);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("trajectory: cannot write " + path);
    out << "# seed=" << ep.seed << "\n" << kHeader << "\n";

    std::size_t trial_at = 0;
    for (const StepRecord& s : ep.steps) {
      out << fmt(s.t) << ',' << fmt(s.q[0]) << ',' << fmt(s.q[1]) << ',' << fmt(s.qdot[0]) << ','
          << fmt(s.qdot[1]);
      for (int i = 0; i < kNumMuscles; ++i) out << ',' << fmt(s.act[i]);
      for (int i = 0; i < kNumMuscles; ++i) out << ',' << fmt(s.u[i]);
      out << ',' << fmt(s.fingertip[0]) << ',' << fmt(s.fingertip[1]) << ',' << fmt(s.dist) << ','
          << s.target << ',' << (s.pressed_correct ? 1 : 0) << ',' << (s.pressed_wrong ? 1 : 0)
          << ',' << fmt(s.reward.bonus_term) << ',' << fmt(s.reward.distance_term) << ','
          << fmt(s.reward.effort_term) << ',' << fmt(s.reward.total) << ',' << to_string(s.status);
      const bool resolved = s.status == StepStatus::trial_success ||
                            s.status == StepStatus::trial_timeout ||
                            s.status == StepStatus::episode_done;
      if (resolved && trial_at < ep.trials.size()) {
        const TrialRecord& t = ep.trials[trial_at++];
        out << ',' << (t.success ? "success" : "timeout") << ',' << fmt(t.duration);
      } else {
        out << ",,";
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("trajectory: write failed for " + path);

    if (svg) {
      // One polyline per trial, coloured by its target; world metres mapped
      // to a 600x600 view with y flipped.
      char sbuf[32];
      std::snprintf(sbuf, sizeof sbuf, "episode_%03zu.svg", e);
      std::ofstream sv(dir + "/" + sbuf);
      const double x0 = -0.1, x1 = 0.7, y0 = -0.75, y1 = 0.35;
      const double w = 600, h = 600 * (y1 - y0) / (x1 - x0);
      const auto px = [&](double x) { return (x - x0) / (x1 - x0) * w; };
      const auto py = [&](double y) { return h - (y - y0) / (y1 - y0) * h; };
      static const char* kColours[kNumButtons] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e"};
      sv << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
      ButtonLayout layout;  // default geometry; paths are what matters here
      const double rpx = layout.radius / (x1 - x0) * w;
      for (int b = 0; b < kNumButtons; ++b)
        sv << "<circle cx='" << px(layout.positions[static_cast<std::size_t>(b)].x()) << "' cy='"
           << py(layout.positions[static_cast<std::size_t>(b)].y()) << "' r='" << rpx
           << "' fill='none' stroke='" << kColours[b] << "'/>\n";
      std::size_t start = 0;
      for (std::size_t i = 0; i < ep.steps.size(); ++i) {
        if (ep.steps[i].status == StepStatus::running && i + 1 != ep.steps.size()) continue;
        sv << "<polyline fill='none' stroke='" << kColours[ep.steps[start].target % kNumButtons]
           << "' stroke-width='1' points='";
        for (std::size_t k = start; k <= i; ++k)
          sv << px(ep.steps[k].fingertip[0]) << ',' << py(ep.steps[k].fingertip[1]) << ' ';
        sv << "'/>\n";
        start = i + 1;
      }
      sv << "</svg>\n";
    }
  }
}

std::vector<EpisodeLog> read_trajectories(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("episode_", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("trajectory: no episode files under " + dir);

  std::vector<EpisodeLog> episodes;
  for (const std::string& path : files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trajectory: cannot read " + path);
    EpisodeLog ep;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        const auto at = line.find("seed=");
        if (at != std::string::npos) ep.seed = std::stoull(line.substr(at + 5));
        continue;
      }
      if (line.rfind("t,", 0) == 0) continue;  // header
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      while (cells.size() < 30) cells.emplace_back();
      StepRecord s;
      int at = 0;
      const auto num = [&]() { return std::strtod(cells[static_cast<std::size_t>(at++)].c_str(), nullptr); };
      s.t = num();
      s.q[0] = num();
      s.q[1] = num();
      s.qdot[0] = num();
      s.qdot[1] = num();
      for (int i = 0; i < kNumMuscles; ++i) s.act[i] = num();
      for (int i = 0; i < kNumMuscles; ++i) s.u[i] = num();
      s.fingertip[0] = num();
      s.fingertip[1] = num();
      s.dist = num();
      s.target = static_cast<int>(num());
      s.pressed_correct = num() != 0.0;
      s.pressed_wrong = num() != 0.0;
      s.reward.bonus_term = num();
      s.reward.distance_term = num();
      s.reward.effort_term = num();
      s.reward.total = num();
      s.status = status_from_string(cells[static_cast<std::size_t>(at++)]);
      const std::string& outcome = cells[static_cast<std::size_t>(at++)];
      if (!outcome.empty()) {
        TrialRecord t;
        t.target = s.target;
        t.success = outcome == "success";
        t.duration = std::strtod(cells[static_cast<std::size_t>(at)].c_str(), nullptr);
        ep.trials.push_back(t);
      }
      ep.steps.push_back(s);
    }
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

Metrics metrics_from_exported(const std::string& dir) {
  const std::vector<EpisodeLog> episodes = read_trajectories(dir);
  return compute_metrics(episodes);
}

}  // namespace reachlab
