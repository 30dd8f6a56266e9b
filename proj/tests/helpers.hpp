#pragma once

#include <cmath>

#include "reachlab/env.hpp"
#include "reachlab/rng.hpp"

namespace reachlab::testing {

// Scripted feedback controller used as a ground-truth "competent user":
// inverse kinematics to the current target, PD in joint space with gravity
// compensation, torques allocated onto the antagonistic pairs (biarticular
// pair takes the shoulder overflow).
class OracleController {
 public:
  explicit OracleController(double kp = 60.0, double kd = 6.0) : kp_(kp), kd_(kd) {}

  MuscleCommand command(const ChoiceReactionEnv& env) const {
    const Arm& arm = env.arm();
    const ArmParams& p = arm.params();
    const Vec2 goal = env.params().layout.positions[static_cast<std::size_t>(env.target())];
    const Vec2 q_des = ik(p, goal);
    const ArmState& s = env.state();

    Vec2 tau = kp_ * (q_des - s.q) - kd_ * s.qdot + arm.gravity_torque(s.q);
    const double gain = p.moment_arm * p.max_force;
    double d1 = tau[0] / gain;
    double d2 = tau[1] / gain;
    const double d1c = std::clamp(d1, -1.0, 1.0);
    const double dbi = std::clamp(d1 - d1c, -1.0, 1.0);  // shoulder overflow
    const double d2c = std::clamp(d2 - dbi, -1.0, 1.0);

    MuscleCommand cmd;
    cmd.u[0] = std::max(d1c, 0.0);
    cmd.u[1] = std::max(-d1c, 0.0);
    cmd.u[2] = std::max(d2c, 0.0);
    cmd.u[3] = std::max(-d2c, 0.0);
    cmd.u[4] = std::max(dbi, 0.0);
    cmd.u[5] = std::max(-dbi, 0.0);
    return cmd;
  }

  static Vec2 ik(const ArmParams& p, const Vec2& goal) {
    const double r2 = goal.squaredNorm();
    double c2 = (r2 - p.l1 * p.l1 - p.l2 * p.l2) / (2.0 * p.l1 * p.l2);
    c2 = std::clamp(c2, -1.0, 1.0);
    const double q2 = std::acos(c2);  // elbow-up branch, q2 >= 0
    const double q1 = std::atan2(goal.y(), goal.x()) -
                      std::atan2(p.l2 * std::sin(q2), p.l1 + p.l2 * std::cos(q2));
    return Vec2(std::clamp(q1, p.q_min[0], p.q_max[0]), std::clamp(q2, p.q_min[1], p.q_max[1]));
  }

 private:
  double kp_, kd_;
};

// Exact elementwise equality for Eigen vectors, usable inside test macros.
template <typename A, typename B>
bool bits_equal(const A& a, const B& b) {
  if (a.size() != b.size()) return false;
  return (a.array() == b.array()).all();
}

inline StepSnapshot random_snapshot(Rng& rng) {
  StepSnapshot s;
  for (int i = 0; i < kNumMuscles; ++i) s.u[i] = rng.uniform();
  s.tau = Vec2(rng.uniform(-8, 8), rng.uniform(-8, 8));
  s.tau_dot = Vec2(rng.uniform(-60, 60), rng.uniform(-60, 60));
  s.qacc = Vec2(rng.uniform(-300, 300), rng.uniform(-300, 300));
  s.jerk = Vec2(rng.uniform(-6e4, 6e4), rng.uniform(-6e4, 6e4));
  s.work_inc = rng.uniform(0.0, 0.6);
  s.dist = rng.uniform(0.0, 0.8);
  const double roll = rng.uniform();
  s.pressed_correct = roll < 0.3;
  s.pressed_wrong = !s.pressed_correct && roll < 0.4;
  if (s.pressed_correct) s.dist = 0.0;
  return s;
}

}  // namespace reachlab::testing
