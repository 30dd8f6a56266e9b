#include "reachlab/eval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace reachlab {

double mean_completion_time(std::span<const TrialRecord> trials) {
  if (trials.empty()) throw std::invalid_argument("mean_completion_time: no trials");
  double sum = 0.0;
  for (const TrialRecord& t : trials) sum += t.duration;
  return sum / static_cast<double>(trials.size());
}

Metrics compute_metrics(std::span<const EpisodeLog> episodes) {
  Metrics m;
  double time_sum = 0.0, success_time_sum = 0.0;
  std::array<int, kNumButtons> per_success = {0, 0, 0, 0};
  for (const EpisodeLog& ep : episodes) {
    for (const TrialRecord& t : ep.trials) {
      ++m.n_trials;
      ++m.per_button_trials[static_cast<std::size_t>(t.target)];
      time_sum += t.duration;
      if (t.success) {
        ++m.successes;
        ++per_success[static_cast<std::size_t>(t.target)];
        success_time_sum += t.duration;
      }
    }
  }
  m.success_rate = m.n_trials > 0 ? static_cast<double>(m.successes) / m.n_trials : 0.0;
  m.mean_completion_time = m.n_trials > 0 ? time_sum / m.n_trials : 0.0;
  m.mean_completion_time_success =
      m.successes > 0 ? success_time_sum / m.successes : std::numeric_limits<double>::quiet_NaN();
  for (int b = 0; b < kNumButtons; ++b) {
    const int n = m.per_button_trials[static_cast<std::size_t>(b)];
    m.per_button_success[static_cast<std::size_t>(b)] =
        n > 0 ? static_cast<double>(per_success[static_cast<std::size_t>(b)]) / n : 0.0;
  }
  return m;
}

EvalResult evaluate(const PolicyParams& params, const RewardSpec& spec,
                    const EffortNormalizer& norm, const EnvParams& env_params, int episodes,
                    int clicks_per_episode, std::uint64_t seed) {
  return evaluate_controller(
      [&params](const ChoiceReactionEnv& env) {
        Rng unused(0);  // deterministic mode never draws from it
        return act(params, env.observation(), /*deterministic=*/true, unused);
      },
      spec, norm, env_params, episodes, clicks_per_episode, seed);
}

EvalResult evaluate_controller(const Controller& controller, const RewardSpec& spec,
                               const EffortNormalizer& norm, const EnvParams& env_params,
                               int episodes, int clicks_per_episode, std::uint64_t seed) {
  if (episodes <= 0 || clicks_per_episode <= 0)
    throw std::invalid_argument("evaluate: episodes and clicks must be positive");
  EnvParams ep = env_params;
  ep.episode_clicks = clicks_per_episode;
  ep.max_trials = clicks_per_episode;

  EvalResult out;
  out.episodes.reserve(static_cast<std::size_t>(episodes));

  for (int e = 0; e < episodes; ++e) {
    ChoiceReactionEnv env(ep);
    EpisodeLog log;
    log.seed = Rng::derive(seed, 0xE9A1000ULL + static_cast<std::uint64_t>(e));
    env.reset(log.seed);
    while (!env.done()) {
      const int target_before = env.target();
      const MuscleCommand cmd = controller(env);
      const auto res = env.step(cmd);

      StepRecord rec;
      rec.t = env.state().t;
      rec.q = env.state().q;
      rec.qdot = env.state().qdot;
      rec.act = env.state().act;
      rec.u = res.snapshot.u;
      rec.fingertip = env.fingertip();
      rec.dist = res.snapshot.dist;
      rec.target = target_before;
      rec.pressed_correct = res.snapshot.pressed_correct;
      rec.pressed_wrong = res.snapshot.pressed_wrong;
      rec.reward = composite(spec, res.snapshot, norm);
      rec.status = res.status;
      log.steps.push_back(rec);

      if (res.trial.has_value())
        log.trials.push_back(TrialRecord{res.trial->target, res.trial->success, res.trial->duration});
    }
    out.episodes.push_back(std::move(log));
  }
  out.metrics = compute_metrics(out.episodes);
  return out;
}

}  // namespace reachlab
