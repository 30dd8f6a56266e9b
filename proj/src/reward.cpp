#include "reachlab/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace reachlab {

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void require_nonneg(double v, const char* field) {
  if (!(std::isfinite(v) && v >= 0.0))
    throw std::invalid_argument(std::string("reward: ") + field + " must be finite and >= 0");
}

}  // namespace

const char* to_string(DistanceModel m) {
  switch (m) {
    case DistanceModel::absolute: return "absolute";
    case DistanceModel::squared: return "squared";
    case DistanceModel::exponential: return "exponential";
    case DistanceModel::none: return "none";
  }
  return "?";
}

const char* to_string(EffortModel m) {
  switch (m) {
    case EffortModel::zero: return "zero";
    case EffortModel::dc: return "dc";
    case EffortModel::ctc: return "ctc";
    case EffortModel::jac: return "jac";
    case EffortModel::ejk: return "ejk";
  }
  return "?";
}

DistanceModel distance_model_from_string(const std::string& s) {
  if (s == "absolute") return DistanceModel::absolute;
  if (s == "squared") return DistanceModel::squared;
  if (s == "exponential") return DistanceModel::exponential;
  if (s == "none") return DistanceModel::none;
  throw std::invalid_argument("unknown distance model '" + s + "'");
}

EffortModel effort_model_from_string(const std::string& s) {
  if (s == "zero") return EffortModel::zero;
  if (s == "dc") return EffortModel::dc;
  if (s == "ctc") return EffortModel::ctc;
  if (s == "jac") return EffortModel::jac;
  if (s == "ejk") return EffortModel::ejk;
  throw std::invalid_argument("unknown effort model '" + s + "'");
}

void RewardSpec::validate() const {
  require_nonneg(w_bonus, "w_bonus");
  require_nonneg(w_distance, "w_distance");
  require_nonneg(w_effort, "w_effort");
  require_nonneg(bonus_b, "bonus_b");
  require_nonneg(c1, "c1");
  require_nonneg(c2, "c2");
  require_nonneg(c3, "c3");
  if (effort == EffortModel::ejk && !(c1 + c2 + c3 > 0.0))
    throw std::invalid_argument("reward: ejk requires c1 + c2 + c3 > 0");
}

void EffortNormalizer::validate() const {
  if (!(scale_energy > 0) || !(scale_jerk > 0) || !(scale_work > 0))
    throw std::invalid_argument("reward: normalizer scales must be positive");
}

double bonus(bool pressed_correct, double b) {
  require_nonneg(b, "bonus b");
  return pressed_correct ? b : 0.0;
}

double distance_reward(double dist, DistanceModel model) {
  if (!(dist >= 0.0)) throw std::invalid_argument("reward: dist must be >= 0");
  switch (model) {
    case DistanceModel::absolute: return dist;
    case DistanceModel::squared: return dist * dist;
    case DistanceModel::exponential: return (1.0 - std::exp(-10.0 * dist)) / 10.0;
    case DistanceModel::none: return 0.0;
  }
  return 0.0;
}

double effort_dc(const Muscles& u, double c1) { return c1 * u.squaredNorm(); }

double effort_ctc(const Muscles& u, const Vec2& tau_dot, double c1, double c2) {
  return c1 * u.squaredNorm() + c2 * tau_dot.squaredNorm();
}

double effort_jac(const Muscles& u, const Vec2& qacc, double c1, double c2) {
  return c1 * u.squaredNorm() + c2 * qacc.squaredNorm();
}

EjkComponents ejk_components(const StepSnapshot& snap, const EffortNormalizer& norm) {
  EjkComponents c;
  c.energy = clamp01(snap.u.mean() / norm.scale_energy);
  c.jerk = clamp01(snap.jerk.squaredNorm() / norm.scale_jerk);
  c.work = clamp01(snap.work_inc / norm.scale_work);
  return c;
}

double effort_ejk(double r_energy, double r_jerk, double r_work, double c1, double c2, double c3) {
  const double sum = c1 + c2 + c3;
  if (!(sum > 0.0)) throw std::invalid_argument("reward: ejk requires c1 + c2 + c3 > 0");
  return (c1 * r_energy + c2 * r_jerk + c3 * r_work) / sum;
}

RewardBreakdown composite(const RewardSpec& spec, const StepSnapshot& snap,
                          const EffortNormalizer& norm) {
  RewardBreakdown out;
  out.bonus_term = bonus(snap.pressed_correct, spec.bonus_b);
  out.distance_term = distance_reward(snap.dist, spec.distance);
  switch (spec.effort) {
    case EffortModel::zero:
      out.effort_term = 0.0;
      break;
    case EffortModel::dc:
      out.effort_term = effort_dc(snap.u, spec.c1);
      break;
    case EffortModel::ctc:
      out.effort_term = effort_ctc(snap.u, snap.tau_dot, spec.c1, spec.c2);
      break;
    case EffortModel::jac:
      out.effort_term = effort_jac(snap.u, snap.qacc, spec.c1, spec.c2);
      break;
    case EffortModel::ejk: {
      const EjkComponents c = ejk_components(snap, norm);
      out.effort_term = effort_ejk(c.energy, c.jerk, c.work, spec.c1, spec.c2, spec.c3);
      break;
    }
  }
  out.total = spec.w_bonus * out.bonus_term - spec.w_distance * out.distance_term -
              spec.w_effort * out.effort_term;
  return out;
}

}  // namespace reachlab
