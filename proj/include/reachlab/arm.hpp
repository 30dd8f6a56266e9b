#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

namespace reachlab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Muscles = Eigen::Matrix<double, 6, 1>;

inline constexpr int kNumMuscles = 6;
inline constexpr int kNumJoints = 2;

// Muscle stimulation commands, one per actuator, each in [0,1].
struct MuscleCommand {
  Muscles u = Muscles::Zero();
};

// Joint torques produced by the muscle layer and their control-step derivative.
struct TorqueReading {
  Vec2 tau = Vec2::Zero();
  Vec2 tau_dot = Vec2::Zero();
};

struct ArmState {
  Vec2 q = Vec2::Zero();     // joint angles [rad]: shoulder, elbow
  Vec2 qdot = Vec2::Zero();  // joint velocities [rad/s]
  Vec2 qacc = Vec2::Zero();  // realized acceleration of the last step [rad/s^2]
  Muscles act = Muscles::Zero();  // muscle activations, each in [0,1]
  double t = 0.0;            // simulation time [s]
};

// Planar 2-link arm, vertical plane, gravity along -y, shoulder at the origin.
// Six muscle-like actuators in three antagonistic pairs: shoulder (0 flexor /
// 1 extensor), elbow (2/3) and a biarticular pair (4/5) that torques both
// joints. Pair torque is moment_arm * max_force * (agonist - antagonist).
struct ArmParams {
  double l1 = 0.30;  // upper arm length [m]
  double l2 = 0.35;  // forearm length [m]
  double m1 = 2.0;   // upper arm mass, uniform rod [kg]
  double m2 = 1.5;   // forearm mass, uniform rod [kg]
  double damping = 0.5;      // viscous joint damping [N m s/rad]
  double max_force = 150.0;  // per-muscle force capacity [N]
  double moment_arm = 0.04;  // constant moment arm [m]
  double tau_act = 0.03;     // activation time constant [s]
  double dt_physics = 0.002;
  double dt_control = 0.02;
  double gravity = 9.81;
  std::array<double, 2> q_min = {-0.5 * M_PI, 0.0};
  std::array<double, 2> q_max = {0.75 * M_PI, 0.9 * M_PI};

  int substeps() const { return static_cast<int>(std::lround(dt_control / dt_physics)); }
  void validate() const;
};

class Arm {
 public:
  explicit Arm(const ArmParams& params = {});

  const ArmParams& params() const { return params_; }

  // Arm hanging straight down at its gravity equilibrium, at rest.
  ArmState hanging_state() const;

  // First-order activation filter: act' = act + (u - act) * dt / tau_act,
  // clamped to [0,1]. Throws on non-finite input.
  Muscles activation_step(const Muscles& act, const Muscles& u, double dt) const;

  // Joint torques from the three antagonistic pairs.
  Vec2 muscle_torque(const Muscles& act) const;

  // Advance one physics step of size dt: activation filter, then an RK4 step
  // of the rigid-body dynamics with the muscle torque held constant, then
  // joint-limit projection with the velocity component into an active limit
  // zeroed through an inelastic generalized impulse. qacc of the returned
  // state is the realized (qdot' - qdot)/dt. If actuator_work is non-null it
  // receives the muscle work along the integrated path (the energy-audit
  // quantity; limit impacts dissipate, they never create energy).
  ArmState dynamics_step(const ArmState& state, const MuscleCommand& cmd, double dt,
                         double* actuator_work = nullptr) const;

  // Forward kinematics of the fingertip (distal end of link 2).
  Vec2 fingertip_position(const ArmState& state) const;

  // Unsigned mechanical work of both joints over dt: sum_i |tau_i * qdot_i| * dt.
  double joint_work_increment(const ArmState& state, const Vec2& tau, double dt) const;

  // Dynamics terms, exposed for oracle controllers and tests.
  Mat2 mass_matrix(const Vec2& q) const;
  Vec2 coriolis(const Vec2& q, const Vec2& qdot) const;
  Vec2 gravity_torque(const Vec2& q) const;  // holding torque G(q); gravity enters the dynamics as -G
  Vec2 acceleration(const Vec2& q, const Vec2& qdot, const Vec2& tau) const;

  // Kinetic plus potential energy of the current state.
  double total_energy(const ArmState& state) const;

 private:
  ArmParams params_;
};

}  // namespace reachlab
