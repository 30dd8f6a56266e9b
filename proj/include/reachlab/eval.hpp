#pragma once

#include <array>
#include <span>
#include <vector>

#include "reachlab/policy.hpp"
#include "reachlab/reward.hpp"

namespace reachlab {

struct TrialRecord {
  int target = 0;
  bool success = false;
  double duration = 0.0;  // seconds; exactly the trial timeout for a failure
};

struct StepRecord {
  double t = 0.0;  // simulation time after the step
  Vec2 q = Vec2::Zero();
  Vec2 qdot = Vec2::Zero();
  Muscles act = Muscles::Zero();
  Muscles u = Muscles::Zero();
  Vec2 fingertip = Vec2::Zero();
  double dist = 0.0;
  int target = 0;  // stimulus the policy was acting on during this step
  bool pressed_correct = false;
  bool pressed_wrong = false;
  RewardBreakdown reward;
  StepStatus status = StepStatus::running;
};

struct EpisodeLog {
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::vector<TrialRecord> trials;
};

struct Metrics {
  double success_rate = 0.0;
  double mean_completion_time = 0.0;          // timeouts counted at the 4 s cap
  double mean_completion_time_success = 0.0;  // successful trials only; NaN when none
  std::array<double, kNumButtons> per_button_success = {0, 0, 0, 0};
  std::array<int, kNumButtons> per_button_trials = {0, 0, 0, 0};
  int n_trials = 0;
  int successes = 0;
};

// Mean trial duration; timeouts contribute their capped duration. Throws on
// empty input.
double mean_completion_time(std::span<const TrialRecord> trials);

Metrics compute_metrics(std::span<const EpisodeLog> episodes);

struct EvalResult {
  Metrics metrics;
  std::vector<EpisodeLog> episodes;
};

// Runs `episodes` deterministic-policy episodes on fresh seeded environments.
// An episode ends after clicks_per_episode resolved trials (successes and
// timeouts both count), so n_trials is always episodes * clicks_per_episode.
EvalResult evaluate(const PolicyParams& params, const RewardSpec& spec,
                    const EffortNormalizer& norm, const EnvParams& env_params, int episodes,
                    int clicks_per_episode, std::uint64_t seed);

// Same protocol driven by an arbitrary controller (scripted oracles, probes).
using Controller = std::function<MuscleCommand(const ChoiceReactionEnv&)>;
EvalResult evaluate_controller(const Controller& controller, const RewardSpec& spec,
                               const EffortNormalizer& norm, const EnvParams& env_params,
                               int episodes, int clicks_per_episode, std::uint64_t seed);

}  // namespace reachlab
