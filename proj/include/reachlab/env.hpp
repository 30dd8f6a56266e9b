#pragma once

#include <array>
#include <optional>

#include "reachlab/arm.hpp"
#include "reachlab/rng.hpp"

namespace reachlab {

inline constexpr int kNumButtons = 4;

struct ButtonLayout {
  // 2x2 grid centred in front of the arm: two near and two far buttons.
  std::array<Vec2, kNumButtons> positions = {Vec2(0.31, 0.03), Vec2(0.45, 0.03),
                                             Vec2(0.31, 0.17), Vec2(0.45, 0.17)};
  double radius = 0.025;
  std::array<int, kNumButtons> colours = {0, 1, 2, 3};

  // All buttons must sit strictly inside the arm's reachable annulus and be
  // pairwise disjoint.
  void validate(const ArmParams& arm) const;
};

struct TrialState {
  int target = 0;            // colour index of the current stimulus
  double trial_clock = 0.0;  // seconds since trial start, capped at the timeout
  int presses_done = 0;      // correct presses this episode
};

struct Observation {
  Vec2 q = Vec2::Zero();
  Vec2 qdot = Vec2::Zero();
  Muscles act = Muscles::Zero();
  Vec2 fingertip = Vec2::Zero();
  std::array<double, kNumButtons> stimulus = {0, 0, 0, 0};  // one-hot
  double trial_clock_norm = 0.0;

  static constexpr int kDim = 2 + 2 + kNumMuscles + 2 + kNumButtons + 1;
  Eigen::VectorXd flatten() const;
};

// Everything the reward engine consumes for one control step.
struct StepSnapshot {
  Muscles u = Muscles::Zero();  // command after clamping
  Vec2 tau = Vec2::Zero();
  Vec2 tau_dot = Vec2::Zero();
  Vec2 qacc = Vec2::Zero();
  Vec2 jerk = Vec2::Zero();  // control-step difference of qacc / dt_control
  double work_inc = 0.0;     // unsigned joint work over the control step [J]
  double dist = 0.0;         // fingertip distance to the target button surface [m]
  bool pressed_correct = false;
  bool pressed_wrong = false;
};

enum class StepStatus { running, trial_success, trial_timeout, episode_done };

const char* to_string(StepStatus s);

struct EnvParams {
  ArmParams arm;
  ButtonLayout layout;
  double press_speed = 0.05;   // approach-speed threshold standing in for press force [m/s]
  double trial_timeout = 4.0;  // seconds per trial
  int episode_clicks = 10;     // correct presses that finish an episode
  int max_trials = 10;         // resolved trials (success or timeout) that finish it; 0 = unlimited

  void validate() const;
};

// Euclidean distance from the fingertip to the surface disc of a button;
// zero when touching or inside.
double distance_to_target(const Vec2& fingertip, const ButtonLayout& layout, int target);

// A press requires contact with the disc and an approach speed toward the
// button centre above the threshold.
bool detect_press(const Vec2& prev_fingertip, const Vec2& fingertip, const ButtonLayout& layout,
                  int button, double dt_control, double press_speed = 0.05);

// Choice reaction task: press the button matching the displayed colour within
// the trial timeout; a correct press switches the stimulus to a different
// colour and starts the next trial.
class ChoiceReactionEnv {
 public:
  explicit ChoiceReactionEnv(const EnvParams& params = {});

  struct TrialEvent {
    int target = 0;
    bool success = false;
    double duration = 0.0;  // seconds; exactly trial_timeout for a timeout
  };

  struct StepResult {
    Observation obs;
    StepSnapshot snapshot;
    StepStatus status = StepStatus::running;
    std::optional<TrialEvent> trial;  // set when a trial resolved this step
  };

  Observation reset(std::uint64_t seed);

  // Advances one control step (substeps() physics steps). Throws
  // std::logic_error when the episode is already finished.
  StepResult step(const MuscleCommand& cmd);

  const EnvParams& params() const { return params_; }
  const Arm& arm() const { return arm_; }
  const ArmState& state() const { return state_; }
  TrialState trial_state() const;
  Observation observation() const { return observe(); }
  int target() const { return target_; }
  bool done() const { return done_; }
  Vec2 fingertip() const { return arm_.fingertip_position(state_); }

 private:
  Observation observe() const;

  EnvParams params_;
  Arm arm_;
  Rng rng_{0};
  ArmState state_;
  int target_ = 0;
  int trial_steps_ = 0;
  int timeout_steps_ = 0;
  int presses_done_ = 0;
  int trials_resolved_ = 0;
  bool done_ = true;
  Vec2 tau_prev_ = Vec2::Zero();
  Vec2 qacc_prev_ = Vec2::Zero();
};

}  // namespace reachlab
