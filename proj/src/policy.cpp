#include "reachlab/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace reachlab {

ObsNormalizer make_obs_normalizer(const EnvParams& env) {
  const auto& a = env.arm;
  ObsNormalizer n;
  n.offset = Eigen::VectorXd::Zero(Observation::kDim);
  n.scale = Eigen::VectorXd::Ones(Observation::kDim);
  int at = 0;
  for (int j = 0; j < kNumJoints; ++j, ++at) {  // q: joint range -> [-1, 1]
    n.offset[at] = 0.5 * (a.q_min[j] + a.q_max[j]);
    n.scale[at] = 2.0 / (a.q_max[j] - a.q_min[j]);
  }
  for (int j = 0; j < kNumJoints; ++j, ++at) n.scale[at] = 0.1;  // qdot: ~[-10, 10] rad/s
  for (int i = 0; i < kNumMuscles; ++i, ++at) {  // act: [0,1] -> [-1, 1]
    n.offset[at] = 0.5;
    n.scale[at] = 2.0;
  }
  for (int i = 0; i < 2; ++i, ++at) n.scale[at] = 1.0 / (a.l1 + a.l2);  // fingertip
  at += kNumButtons;  // one-hot stays as is
  n.offset[at] = 0.5;  // trial clock fraction -> [-1, 1]
  n.scale[at] = 2.0;
  return n;
}

PolicyParams make_policy(const EnvParams& env, std::uint64_t seed, std::vector<int> hidden) {
  Rng rng(Rng::derive(seed, 0x9011));
  PolicyParams p;
  p.norm = make_obs_normalizer(env);
  std::vector<int> actor_sizes{Observation::kDim};
  actor_sizes.insert(actor_sizes.end(), hidden.begin(), hidden.end());
  actor_sizes.push_back(kNumMuscles);
  p.actor = Mlp(actor_sizes, rng, 0.01);
  std::vector<int> critic_sizes{Observation::kDim};
  critic_sizes.insert(critic_sizes.end(), hidden.begin(), hidden.end());
  critic_sizes.push_back(1);
  p.critic = Mlp(critic_sizes, rng, 1.0);
  p.log_std = Eigen::VectorXd::Constant(kNumMuscles, kLogStdInit);
  return p;
}

double squash(double z) { return 0.5 * (1.0 + std::tanh(z)); }

double gaussian_logprob(const Eigen::VectorXd& z, const Eigen::VectorXd& mean,
                        const Eigen::VectorXd& log_std) {
  double lp = -0.5 * static_cast<double>(z.size()) * std::log(2.0 * M_PI);
  for (int i = 0; i < z.size(); ++i) {
    const double inv_std = std::exp(-log_std[i]);
    const double d = (z[i] - mean[i]) * inv_std;
    lp += -0.5 * d * d - log_std[i];
  }
  return lp;
}

MuscleCommand act(const PolicyParams& params, const Observation& obs, bool deterministic, Rng& rng,
                  Eigen::VectorXd* presquash, double* logprob) {
  const Eigen::VectorXd raw = obs.flatten();
  if (raw.size() != params.norm.offset.size() || raw.size() != params.actor.input_dim())
    throw std::invalid_argument("act: observation dimension mismatch");
  const Eigen::VectorXd x = params.norm.apply(raw);
  const Eigen::VectorXd mean = params.actor.forward(x);
  Eigen::VectorXd z = mean;
  if (!deterministic) {
    for (int i = 0; i < z.size(); ++i) z[i] += std::exp(params.log_std[i]) * rng.normal();
  }
  MuscleCommand cmd;
  for (int i = 0; i < kNumMuscles; ++i) cmd.u[i] = squash(z[i]);
  if (presquash != nullptr) *presquash = z;
  if (logprob != nullptr) *logprob = gaussian_logprob(z, mean, params.log_std);
  return cmd;
}

double value_of(const PolicyParams& params, const Observation& obs) {
  return params.critic.forward(params.norm.apply(obs.flatten()))[0];
}

}  // namespace reachlab
