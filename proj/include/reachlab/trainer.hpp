#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "reachlab/gae.hpp"
#include "reachlab/policy.hpp"
#include "reachlab/reward.hpp"

namespace reachlab {

struct TrainConfig {
  std::int64_t total_steps = 2'000'000;
  int rollout_length = 2048;  // environment steps per update, summed over workers
  int minibatch_size = 256;
  int epochs = 10;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_ratio = 0.2;
  double learning_rate = 3e-4;
  double entropy_coef = 1e-3;
  std::uint64_t seed = 0;
  int num_envs = 8;

  // Weight of the value loss in the combined objective.
  static constexpr double kValueCoef = 0.5;

  void validate() const;
  std::int64_t num_updates() const { return total_steps / rollout_length; }
};

struct UpdateRecord {
  std::int64_t step = 0;       // environment steps consumed so far
  double mean_return = 0.0;    // mean return of episodes finished in this window (NaN if none)
  int success_count = 0;       // correct presses in this window
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double wall_s = 0.0;  // not part of the determinism digest
};

struct TrainingLog {
  std::vector<UpdateRecord> updates;
  // Hash of all deterministic fields; equal digests mean bit-identical logs.
  std::uint64_t digest() const;
};

struct TrainResult {
  PolicyParams params;
  TrainingLog log;
};

// One flattened minibatch for the clipped surrogate update.
struct PpoBatch {
  Eigen::MatrixXd obs;       // (obs_dim x n), already normalized
  Eigen::MatrixXd actions;   // (act_dim x n), pre-squash
  Eigen::VectorXd logprob_old;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
};

struct PpoLossStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;
};

// Flat parameter vector [actor | log_std | critic] and back.
Eigen::VectorXd policy_flatten(const PolicyParams& p);
void policy_unflatten(PolicyParams& p, const Eigen::VectorXd& theta);

// Clipped-surrogate loss; if grad is non-null it receives dL/dtheta in the
// policy_flatten layout. The gradient is analytic backprop; tests check it
// against central finite differences.
PpoLossStats ppo_loss_and_grad(const PolicyParams& params, const PpoBatch& batch,
                               const TrainConfig& cfg, Eigen::VectorXd* grad);

// On-policy training loop: rollouts over num_envs workers, GAE, minibatched
// clipped-gradient updates. Fully deterministic for a given config. Writes
// periodic checkpoints when checkpoint_dir is non-empty.
TrainResult train(const std::function<ChoiceReactionEnv()>& env_factory, const RewardSpec& spec,
                  const EffortNormalizer& norm, const TrainConfig& cfg,
                  const std::string& checkpoint_dir = "");

}  // namespace reachlab
