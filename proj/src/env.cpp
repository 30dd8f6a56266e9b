#include "reachlab/env.hpp"

#include <cmath>
#include <stdexcept>

namespace reachlab {

void ButtonLayout::validate(const ArmParams& arm) const {
  const double lo = std::abs(arm.l1 - arm.l2);
  const double hi = arm.l1 + arm.l2;
  for (int i = 0; i < kNumButtons; ++i) {
    const double r = positions[i].norm();
    if (!(r > lo && r < hi))
      throw std::invalid_argument("layout: button " + std::to_string(i) + " outside reachable annulus");
  }
  for (int i = 0; i < kNumButtons; ++i)
    for (int j = i + 1; j < kNumButtons; ++j)
      if ((positions[i] - positions[j]).norm() <= 2.0 * radius)
        throw std::invalid_argument("layout: buttons " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
  bool seen[kNumButtons] = {false, false, false, false};
  for (int c : colours) {
    if (c < 0 || c >= kNumButtons || seen[c]) throw std::invalid_argument("layout: colours must be a permutation");
    seen[c] = true;
  }
  if (radius <= 0) throw std::invalid_argument("layout: radius must be positive");
}

void EnvParams::validate() const {
  arm.validate();
  layout.validate(arm);
  if (press_speed < 0) throw std::invalid_argument("env: press_speed must be nonnegative");
  if (trial_timeout <= 0) throw std::invalid_argument("env: trial_timeout must be positive");
  if (episode_clicks <= 0) throw std::invalid_argument("env: episode_clicks must be positive");
  if (max_trials < 0) throw std::invalid_argument("env: max_trials must be nonnegative");
}

const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::running: return "running";
    case StepStatus::trial_success: return "trial_success";
    case StepStatus::trial_timeout: return "trial_timeout";
    case StepStatus::episode_done: return "episode_done";
  }
  return "?";
}

Eigen::VectorXd Observation::flatten() const {
  Eigen::VectorXd v(kDim);
  v << q, qdot, act, fingertip, stimulus[0], stimulus[1], stimulus[2], stimulus[3], trial_clock_norm;
  return v;
}

double distance_to_target(const Vec2& fingertip, const ButtonLayout& layout, int target) {
  if (target < 0 || target >= kNumButtons) throw std::invalid_argument("distance_to_target: bad target");
  return std::max(0.0, (fingertip - layout.positions[target]).norm() - layout.radius);
}

bool detect_press(const Vec2& prev_fingertip, const Vec2& fingertip, const ButtonLayout& layout,
                  int button, double dt_control, double press_speed) {
  const Vec2& c = layout.positions[button];
  if ((fingertip - c).norm() > layout.radius) return false;
  const double approach = ((prev_fingertip - c).norm() - (fingertip - c).norm()) / dt_control;
  return approach > press_speed;
}

ChoiceReactionEnv::ChoiceReactionEnv(const EnvParams& params) : params_(params), arm_(params.arm) {
  params_.validate();
  timeout_steps_ = static_cast<int>(std::lround(params_.trial_timeout / params_.arm.dt_control));
}

Observation ChoiceReactionEnv::reset(std::uint64_t seed) {
  rng_ = Rng(Rng::derive(seed, 0x7261));
  state_ = arm_.hanging_state();
  target_ = rng_.uniform_int(kNumButtons);
  trial_steps_ = 0;
  presses_done_ = 0;
  trials_resolved_ = 0;
  done_ = false;
  tau_prev_ = arm_.muscle_torque(state_.act);
  qacc_prev_ = Vec2::Zero();
  return observe();
}

ChoiceReactionEnv::StepResult ChoiceReactionEnv::step(const MuscleCommand& cmd) {
  if (done_) throw std::logic_error("env: step() on a finished episode");

  const Vec2 prev_tip = fingertip();
  const double dtp = params_.arm.dt_physics;
  const double dtc = params_.arm.dt_control;

  StepResult out;
  StepSnapshot& snap = out.snapshot;
  for (int i = 0; i < kNumMuscles; ++i) snap.u[i] = std::clamp(cmd.u[i], 0.0, 1.0);

  for (int k = 0; k < params_.arm.substeps(); ++k) {
    state_ = arm_.dynamics_step(state_, cmd, dtp);
    snap.work_inc += arm_.joint_work_increment(state_, arm_.muscle_torque(state_.act), dtp);
  }

  snap.tau = arm_.muscle_torque(state_.act);
  snap.tau_dot = (snap.tau - tau_prev_) / dtc;
  snap.qacc = state_.qacc;
  snap.jerk = (snap.qacc - qacc_prev_) / dtc;
  tau_prev_ = snap.tau;
  qacc_prev_ = snap.qacc;

  const Vec2 tip = fingertip();
  snap.dist = distance_to_target(tip, params_.layout, target_);

  // The fingertip can be inside at most one disc (discs are disjoint).
  int hit = -1;
  for (int b = 0; b < kNumButtons; ++b) {
    if (detect_press(prev_tip, tip, params_.layout, b, dtc, params_.press_speed)) {
      hit = b;
      break;
    }
  }
  snap.pressed_correct = hit == target_;
  snap.pressed_wrong = hit >= 0 && hit != target_;

  ++trial_steps_;
  out.status = StepStatus::running;
  if (snap.pressed_correct) {
    ++presses_done_;
    ++trials_resolved_;
    out.trial = TrialEvent{target_, true, trial_steps_ * dtc};
    target_ = (target_ + 1 + rng_.uniform_int(kNumButtons - 1)) % kNumButtons;
    trial_steps_ = 0;
    out.status = StepStatus::trial_success;
  } else if (trial_steps_ >= timeout_steps_) {
    ++trials_resolved_;
    out.trial = TrialEvent{target_, false, params_.trial_timeout};
    trial_steps_ = 0;
    out.status = StepStatus::trial_timeout;
  }
  if (presses_done_ >= params_.episode_clicks ||
      (params_.max_trials > 0 && trials_resolved_ >= params_.max_trials)) {
    out.status = StepStatus::episode_done;
    done_ = true;
  }

  out.obs = observe();
  return out;
}

TrialState ChoiceReactionEnv::trial_state() const {
  return TrialState{target_, std::min(trial_steps_ * params_.arm.dt_control, params_.trial_timeout),
                    presses_done_};
}

Observation ChoiceReactionEnv::observe() const {
  Observation o;
  o.q = state_.q;
  o.qdot = state_.qdot;
  o.act = state_.act;
  o.fingertip = fingertip();
  o.stimulus.fill(0.0);
  o.stimulus[static_cast<std::size_t>(target_)] = 1.0;
  o.trial_clock_norm = trial_steps_ * params_.arm.dt_control / params_.trial_timeout;
  return o;
}

}  // namespace reachlab
