#pragma once

#include "reachlab/env.hpp"
#include "reachlab/mlp.hpp"

namespace reachlab {

// Fixed affine observation scaling derived from the configured physical
// ranges; no running statistics, so rewards and policies stay comparable
// across runs.
struct ObsNormalizer {
  Eigen::VectorXd offset;
  Eigen::VectorXd scale;

  Eigen::VectorXd apply(const Eigen::VectorXd& raw) const { return (raw - offset).cwiseProduct(scale); }
};

ObsNormalizer make_obs_normalizer(const EnvParams& env);

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 1.0;
inline constexpr double kLogStdInit = -0.5;

// Gaussian policy in pre-squash space plus a state-value critic. Commands are
// the Gaussian sample pushed through 0.5 * (1 + tanh(z)), so they always land
// in [0,1]^6 and a zero pre-squash mean maps to 0.5.
struct PolicyParams {
  ObsNormalizer norm;
  Mlp actor;                 // normalized obs -> pre-squash mean
  Eigen::VectorXd log_std;   // state-independent, clamped to [kLogStdMin, kLogStdMax]
  Mlp critic;                // normalized obs -> scalar value
};

PolicyParams make_policy(const EnvParams& env, std::uint64_t seed,
                         std::vector<int> hidden = {64, 64});

double squash(double z);

// Sample (or take the mean of) the policy at one observation. Optionally
// reports the pre-squash action and its Gaussian log density, which the
// trainer stores for the surrogate objective.
MuscleCommand act(const PolicyParams& params, const Observation& obs, bool deterministic, Rng& rng,
                  Eigen::VectorXd* presquash = nullptr, double* logprob = nullptr);

double value_of(const PolicyParams& params, const Observation& obs);

// Gaussian log density of z under mean/log_std (diagonal).
double gaussian_logprob(const Eigen::VectorXd& z, const Eigen::VectorXd& mean,
                        const Eigen::VectorXd& log_std);

}  // namespace reachlab
