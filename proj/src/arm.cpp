#include "reachlab/arm.hpp"

#include <cmath>
#include <string>

namespace reachlab {

namespace {

void require_finite(const Muscles& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

void ArmParams::validate() const {
  if (l1 <= 0 || l2 <= 0 || m1 <= 0 || m2 <= 0) throw std::invalid_argument("arm: lengths and masses must be positive");
  if (dt_physics <= 0 || dt_control <= 0) throw std::invalid_argument("arm: timesteps must be positive");
  if (std::abs(substeps() * dt_physics - dt_control) > 1e-12)
    throw std::invalid_argument("arm: dt_control must be an integer multiple of dt_physics");
  if (tau_act <= 0) throw std::invalid_argument("arm: tau_act must be positive");
  if (max_force < 0 || moment_arm < 0 || damping < 0) throw std::invalid_argument("arm: negative actuation parameter");
  for (int j = 0; j < kNumJoints; ++j)
    if (q_min[j] >= q_max[j]) throw std::invalid_argument("arm: empty joint range");
}

Arm::Arm(const ArmParams& params) : params_(params) { params_.validate(); }

ArmState Arm::hanging_state() const {
  ArmState s;
  s.q = Vec2(-0.5 * M_PI, 0.0);
  return s;
}

Muscles Arm::activation_step(const Muscles& act, const Muscles& u, double dt) const {
  require_finite(act, "activation_step act");
  require_finite(u, "activation_step u");
  if (!(dt > 0)) throw std::invalid_argument("activation_step: dt must be positive");
  Muscles out;
  const double k = dt / params_.tau_act;
  for (int i = 0; i < kNumMuscles; ++i) out[i] = clamp01(act[i] + (u[i] - act[i]) * k);
  return out;
}

Vec2 Arm::muscle_torque(const Muscles& act) const {
  require_finite(act, "muscle_torque act");
  const double gain = params_.moment_arm * params_.max_force;
  const double d_shoulder = act[0] - act[1];
  const double d_elbow = act[2] - act[3];
  const double d_biart = act[4] - act[5];
  return Vec2(gain * (d_shoulder + d_biart), gain * (d_elbow + d_biart));
}

Mat2 Arm::mass_matrix(const Vec2& q) const {
  const double lc1 = 0.5 * params_.l1, lc2 = 0.5 * params_.l2;
  const double i1 = params_.m1 * params_.l1 * params_.l1 / 12.0;
  const double i2 = params_.m2 * params_.l2 * params_.l2 / 12.0;
  const double c2 = std::cos(q[1]);
  Mat2 m;
  m(0, 0) = i1 + i2 + params_.m1 * lc1 * lc1 +
            params_.m2 * (params_.l1 * params_.l1 + lc2 * lc2 + 2.0 * params_.l1 * lc2 * c2);
  m(0, 1) = i2 + params_.m2 * (lc2 * lc2 + params_.l1 * lc2 * c2);
  m(1, 0) = m(0, 1);
  m(1, 1) = i2 + params_.m2 * lc2 * lc2;
  return m;
}

Vec2 Arm::coriolis(const Vec2& q, const Vec2& qdot) const {
  const double lc2 = 0.5 * params_.l2;
  const double h = params_.m2 * params_.l1 * lc2 * std::sin(q[1]);
  return Vec2(-h * qdot[1] * qdot[1] - 2.0 * h * qdot[0] * qdot[1], h * qdot[0] * qdot[0]);
}

Vec2 Arm::gravity_torque(const Vec2& q) const {
  const double lc1 = 0.5 * params_.l1, lc2 = 0.5 * params_.l2;
  const double g = params_.gravity;
  const double c1 = std::cos(q[0]);
  const double c12 = std::cos(q[0] + q[1]);
  return Vec2((params_.m1 * lc1 + params_.m2 * params_.l1) * g * c1 + params_.m2 * lc2 * g * c12,
              params_.m2 * lc2 * g * c12);
}

Vec2 Arm::acceleration(const Vec2& q, const Vec2& qdot, const Vec2& tau) const {
  const Vec2 rhs = tau - params_.damping * qdot - coriolis(q, qdot) - gravity_torque(q);
  return mass_matrix(q).ldlt().solve(rhs);
}

namespace {

// Acceleration with a set of joints pinned at their limits (qacc = 0 there);
// the holding force enters through the reduced solve and does no work.
Vec2 constrained_acceleration(const Arm& arm, const Vec2& q, const Vec2& qdot, const Vec2& tau,
                              const bool pinned[kNumJoints]) {
  if (pinned[0] && pinned[1]) return Vec2::Zero();
  if (!pinned[0] && !pinned[1]) return arm.acceleration(q, qdot, tau);
  const int j = pinned[0] ? 0 : 1;  // pinned joint
  const int o = 1 - j;
  const Vec2 rhs = tau - arm.params().damping * qdot - arm.coriolis(q, qdot) - arm.gravity_torque(q);
  Vec2 a = Vec2::Zero();
  a[o] = rhs[o] / arm.mass_matrix(q)(o, o);
  return a;
}

}  // namespace

ArmState Arm::dynamics_step(const ArmState& state, const MuscleCommand& cmd, double dt,
                            double* actuator_work) const {
  if (!state.q.allFinite() || !state.qdot.allFinite() || !state.act.allFinite())
    throw std::invalid_argument("dynamics_step: non-finite state");
  require_finite(cmd.u, "dynamics_step u");
  Muscles u = cmd.u;
  for (int i = 0; i < kNumMuscles; ++i) u[i] = clamp01(u[i]);

  ArmState next = state;
  next.act = activation_step(state.act, u, dt);
  const Vec2 tau = muscle_torque(next.act);

  Vec2 q = state.q;
  Vec2 v = state.qdot;
  double work = 0.0;

  const auto at_lower = [&](int j) { return q[j] <= params_.q_min[j]; };
  const auto at_upper = [&](int j) { return q[j] >= params_.q_max[j]; };
  const auto moving_in = [&](int j) {
    return (at_lower(j) && v[j] < 0.0) || (at_upper(j) && v[j] > 0.0);
  };

  // Inelastic impulse along e_j: zeroes v[j], recoils the other joint through
  // the mass-matrix coupling. Always removes kinetic energy. A repeat hit on
  // an already stopped joint means simultaneous contact: full stop.
  const auto resolve_impacts = [&]() {
    bool stopped[kNumJoints] = {false, false};
    for (int pass = 0; pass < 2 * kNumJoints; ++pass) {
      if (!moving_in(0) && !moving_in(1)) return;
      if ((moving_in(0) && moving_in(1)) || (moving_in(0) && stopped[0]) ||
          (moving_in(1) && stopped[1])) {
        v.setZero();
        return;
      }
      const int j = moving_in(0) ? 0 : 1;
      const Mat2 minv = mass_matrix(q).inverse();
      v -= minv.col(j) * (v[j] / minv(j, j));
      v[j] = 0.0;
      stopped[j] = true;
    }
  };

  // One RK4 step of size h over the free joints, pinned joints held.
  const auto rk4 = [&](const Vec2& q0, const Vec2& v0, double h, const bool pinned[kNumJoints]) {
    const auto f = [&](const Vec2& qq, const Vec2& vv) {
      return std::pair<Vec2, Vec2>(vv, constrained_acceleration(*this, qq, vv, tau, pinned));
    };
    const auto [k1q, k1v] = f(q0, v0);
    const auto [k2q, k2v] = f(q0 + 0.5 * h * k1q, v0 + 0.5 * h * k1v);
    const auto [k3q, k3v] = f(q0 + 0.5 * h * k2q, v0 + 0.5 * h * k2v);
    const auto [k4q, k4v] = f(q0 + h * k3q, v0 + h * k3v);
    Vec2 q1 = q0 + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    Vec2 v1 = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    for (int j = 0; j < kNumJoints; ++j) {
      if (pinned[j]) {
        q1[j] = q0[j];
        v1[j] = 0.0;
      }
    }
    return std::pair<Vec2, Vec2>(q1, v1);
  };

  const auto beyond = [&](const Vec2& qq, int j) {
    return qq[j] < params_.q_min[j] || qq[j] > params_.q_max[j];
  };

  // Event-resolved integration: segments end either at dt or exactly on a
  // joint limit, where an inelastic impulse is applied. No segment ever
  // leaves the admissible box, so tau . dq is the exact actuator work along
  // the realized path and limit handling only dissipates.
  double t_left = dt;
  for (int event = 0; event < 8 && t_left > 1e-15 * dt; ++event) {
    resolve_impacts();

    // Joints resting on a limit and accelerated into it stay pinned.
    bool pinned[kNumJoints] = {false, false};
    for (int pass = 0; pass < kNumJoints; ++pass) {
      const Vec2 a = constrained_acceleration(*this, q, v, tau, pinned);
      bool changed = false;
      for (int j = 0; j < kNumJoints; ++j) {
        if (pinned[j] || v[j] != 0.0) continue;
        if ((at_lower(j) && a[j] < 0.0) || (at_upper(j) && a[j] > 0.0)) {
          pinned[j] = true;
          changed = true;
        }
      }
      if (!changed) break;
    }

    auto [q1, v1] = rk4(q, v, t_left, pinned);
    if (!beyond(q1, 0) && !beyond(q1, 1)) {
      work += tau.dot(q1 - q);
      q = q1;
      v = v1;
      break;
    }

    // Bisect the earliest limit crossing and land exactly on the boundary
    // (hi overshoots by at most ~2^-60 of the segment; the clamp snaps it).
    double lo = 0.0, hi = t_left;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto [qm, vm] = rk4(q, v, mid, pinned);
      (beyond(qm, 0) || beyond(qm, 1)) ? hi = mid : lo = mid;
    }
    auto [qc, vc] = rk4(q, v, hi, pinned);
    for (int j = 0; j < kNumJoints; ++j)
      qc[j] = std::clamp(qc[j], params_.q_min[j], params_.q_max[j]);
    work += tau.dot(qc - q);
    q = qc;
    v = vc;
    t_left -= hi;
    if (event == 6) {  // persistent chatter: stop everything, strictly dissipative
      resolve_impacts();
      v.setZero();
      break;
    }
  }
  resolve_impacts();
  for (int j = 0; j < kNumJoints; ++j) q[j] = std::clamp(q[j], params_.q_min[j], params_.q_max[j]);

  next.q = q;
  next.qdot = v;
  next.qacc = (v - state.qdot) / dt;
  next.t = state.t + dt;
  if (actuator_work != nullptr) *actuator_work = work;

  if (!next.q.allFinite()) throw std::runtime_error("dynamics_step: joint angles diverged");
  if (!next.qdot.allFinite()) throw std::runtime_error("dynamics_step: joint velocities diverged");
  if (!next.qacc.allFinite()) throw std::runtime_error("dynamics_step: joint accelerations diverged");
  return next;
}

Vec2 Arm::fingertip_position(const ArmState& state) const {
  const double q1 = state.q[0], q12 = state.q[0] + state.q[1];
  return Vec2(params_.l1 * std::cos(q1) + params_.l2 * std::cos(q12),
              params_.l1 * std::sin(q1) + params_.l2 * std::sin(q12));
}

double Arm::joint_work_increment(const ArmState& state, const Vec2& tau, double dt) const {
  return (std::abs(tau[0] * state.qdot[0]) + std::abs(tau[1] * state.qdot[1])) * dt;
}

double Arm::total_energy(const ArmState& state) const {
  const double lc1 = 0.5 * params_.l1, lc2 = 0.5 * params_.l2;
  const double ke = 0.5 * state.qdot.dot(mass_matrix(state.q) * state.qdot);
  const double y1 = lc1 * std::sin(state.q[0]);
  const double y2 = params_.l1 * std::sin(state.q[0]) + lc2 * std::sin(state.q[0] + state.q[1]);
  const double pe = params_.gravity * (params_.m1 * y1 + params_.m2 * y2);
  return ke + pe;
}

}  // namespace reachlab
