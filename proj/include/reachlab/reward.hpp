#pragma once

#include <string>

#include "reachlab/env.hpp"

namespace reachlab {

enum class DistanceModel { absolute, squared, exponential, none };
enum class EffortModel { zero, dc, ctc, jac, ejk };

const char* to_string(DistanceModel m);
const char* to_string(EffortModel m);
DistanceModel distance_model_from_string(const std::string& s);
EffortModel effort_model_from_string(const std::string& s);

// One fully specified reward function: r = w_bonus * f_bonus
//                                        - w_distance * f_distance
//                                        - w_effort * f_effort.
struct RewardSpec {
  double w_bonus = 1.0;
  double w_distance = 1.0;
  double w_effort = 0.0;
  double bonus_b = 0.0;  // paid once per correct press
  DistanceModel distance = DistanceModel::none;
  EffortModel effort = EffortModel::zero;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;  // effort coefficients; unused ones ignored
  std::string id;                       // optional configuration label

  void validate() const;  // throws std::invalid_argument naming the offending field
};

// Raw component values plus the weighted total.
struct RewardBreakdown {
  double bonus_term = 0.0;     // f_bonus, unweighted
  double distance_term = 0.0;  // f_distance, unweighted
  double effort_term = 0.0;    // f_effort, unweighted
  double total = 0.0;
};

// Fixed scales that map the EJK inputs into [0,1]. scale_jerk and scale_work
// are the 99th percentiles of ||jerk||^2 and of the per-step joint work
// observed under a uniform-random policy on the default environment, frozen
// here so rewards are stationary and runs comparable.
struct EffortNormalizer {
  double scale_energy = 1.0;
  double scale_jerk = kDefaultScaleJerk;
  double scale_work = kDefaultScaleWork;

  static constexpr double kDefaultScaleJerk = 2.571e9;  // [rad^2/s^6]
  static constexpr double kDefaultScaleWork = 0.353;    // [J]

  void validate() const;
};

double bonus(bool pressed_correct, double b);
double distance_reward(double dist, DistanceModel model);
double effort_dc(const Muscles& u, double c1);
double effort_ctc(const Muscles& u, const Vec2& tau_dot, double c1, double c2);
double effort_jac(const Muscles& u, const Vec2& qacc, double c1, double c2);

struct EjkComponents {
  double energy = 0.0;
  double jerk = 0.0;
  double work = 0.0;
};

// Normalized EJK inputs, each clamped to [0,1].
EjkComponents ejk_components(const StepSnapshot& snap, const EffortNormalizer& norm);

// Convex combination (c1*r_energy + c2*r_jerk + c3*r_work) / (c1+c2+c3).
double effort_ejk(double r_energy, double r_jerk, double r_work, double c1, double c2, double c3);

// Full per-step reward for one control step.
RewardBreakdown composite(const RewardSpec& spec, const StepSnapshot& snap,
                          const EffortNormalizer& norm);

}  // namespace reachlab
