#pragma once

// Test-only oracle: an independent, literal transcription of the 60 bundled
// reward rows, evaluated directly as the piecewise composite
//   r = w_b * f_bonus - w_d * f_distance - w_e * f_effort.
// Kept deliberately separate from the library's reward engine: everything is
// recomputed from the raw snapshot fields with locally coded formulas.

#include <cmath>
#include <stdexcept>
#include <string>

#include "reachlab/env.hpp"
#include "reachlab/reward.hpp"

namespace reachlab::testing {

struct OracleRow {
  int id;
  const char* effort;    // "zero", "dc", "ctc", "jac", "ejk"
  double w_effort;
  double c1, c2, c3;
  const char* distance;  // "exp", "abs", "sq", "none"
  double b;
};

// Row-for-row transcription of the two source tables (w_distance = w_bonus = 1).
inline const OracleRow kOracleRows[60] = {
    {1, "ejk", 0.8, 1, 8, 1, "exp", 8},
    {2, "ejk", 0.8, 1, 8, 1, "abs", 8},
    {3, "ejk", 0.8, 1, 8, 1, "sq", 8},
    {4, "ejk", 0.8, 1, 8, 1, "exp", 0},
    {5, "ejk", 0.8, 1, 8, 1, "abs", 0},
    {6, "ejk", 0.8, 1, 8, 1, "sq", 0},
    {7, "jac", 0.1, 0.0198, 6.67e-5, 0, "exp", 8},
    {8, "jac", 0.1, 0.0198, 6.67e-5, 0, "abs", 8},
    {9, "jac", 0.1, 0.0198, 6.67e-5, 0, "sq", 8},
    {10, "jac", 0.1, 0.0198, 6.67e-5, 0, "exp", 0},
    {11, "jac", 0.1, 0.0198, 6.67e-5, 0, "abs", 0},
    {12, "jac", 0.1, 0.0198, 6.67e-5, 0, "sq", 0},
    {13, "ctc", 0.01, 0.649, 0.0177, 0, "exp", 8},
    {14, "ctc", 0.01, 0.649, 0.0177, 0, "abs", 8},
    {15, "ctc", 0.01, 0.649, 0.0177, 0, "sq", 8},
    {16, "ctc", 0.01, 0.649, 0.0177, 0, "exp", 0},
    {17, "ctc", 0.01, 0.649, 0.0177, 0, "abs", 0},
    {18, "ctc", 0.01, 0.649, 0.0177, 0, "sq", 0},
    {19, "dc", 0.01, 0.1477, 0, 0, "exp", 8},
    {20, "dc", 0.01, 0.1477, 0, 0, "abs", 8},
    {21, "dc", 0.01, 0.1477, 0, 0, "sq", 8},
    {22, "dc", 0.01, 0.1477, 0, 0, "exp", 0},
    {23, "dc", 0.01, 0.1477, 0, 0, "abs", 0},
    {24, "dc", 0.01, 0.1477, 0, 0, "sq", 0},
    {25, "zero", 0, 0, 0, 0, "exp", 8},
    {26, "zero", 0, 0, 0, 0, "abs", 8},
    {27, "zero", 0, 0, 0, 0, "sq", 8},
    {28, "zero", 0, 0, 0, 0, "exp", 0},
    {29, "zero", 0, 0, 0, 0, "abs", 0},
    {30, "zero", 0, 0, 0, 0, "sq", 0},
    {31, "zero", 0, 0, 0, 0, "none", 8},
    {32, "zero", 0, 0, 0, 0, "none", 50},
    {33, "ejk", 0.8, 1, 8, 1, "none", 1},
    {34, "ejk", 0.8, 1, 8, 1, "none", 8},
    {35, "ejk", 0.8, 1, 8, 1, "none", 50},
    {36, "ejk", 16, 1, 8, 1, "exp", 8},
    {37, "ejk", 8, 1, 8, 1, "exp", 8},
    {38, "ejk", 4, 1, 8, 1, "exp", 8},
    {39, "ejk", 1.6, 1, 8, 1, "exp", 8},
    {40, "ejk", 0.4, 1, 8, 1, "exp", 8},
    {41, "ejk", 0.16, 1, 8, 1, "exp", 8},
    {42, "ejk", 0.08, 1, 8, 1, "exp", 8},
    {43, "ejk", 0.04, 1, 8, 1, "exp", 8},
    {44, "jac", 1, 0.0198, 6.67e-5, 0, "exp", 8},
    {45, "jac", 1, 0.0198, 6.67e-5, 0, "exp", 0},
    {46, "jac", 0.01, 0.0198, 6.67e-5, 0, "exp", 8},
    {47, "jac", 0.01, 0.0198, 6.67e-4, 0, "exp", 8},
    {48, "ctc", 1, 0.649, 0.0177, 0, "exp", 8},
    {49, "ctc", 1, 0.649, 0.0177, 0, "exp", 0},
    {50, "ctc", 0.1, 0.649, 0.0177, 0, "exp", 8},
    {51, "ctc", 0.001, 0.649, 0.0177, 0, "exp", 8},
    {52, "dc", 1, 0.1477, 0, 0, "exp", 8},
    {53, "dc", 1, 0.1477, 0, 0, "exp", 0},
    {54, "dc", 0.001, 0.1477, 0, 0, "exp", 8},
    {55, "dc", 1, 0.0001, 0, 0, "exp", 8},
    {56, "dc", 1, 0.0001, 0, 0, "exp", 8},
    {57, "dc", 5, 0.0001, 0, 0, "exp", 8},
    {58, "dc", 10, 0.0001, 0, 0, "exp", 8},
    {59, "dc", 50, 0.0001, 0, 0, "exp", 8},
    {60, "dc", 100, 0.0001, 0, 0, "exp", 8},
};

inline double oracle_reward(int id, const StepSnapshot& s, const EffortNormalizer& norm) {
  if (id < 1 || id > 60) throw std::out_of_range("oracle row id");
  const OracleRow& row = kOracleRows[id - 1];

  const double f_bonus = s.pressed_correct ? row.b : 0.0;

  double f_dist = 0.0;
  const std::string d = row.distance;
  if (d == "abs") f_dist = s.dist;
  else if (d == "sq") f_dist = s.dist * s.dist;
  else if (d == "exp") f_dist = (1.0 - std::exp(-10.0 * s.dist)) / 10.0;

  double u2 = 0.0, usum = 0.0;
  for (int i = 0; i < kNumMuscles; ++i) {
    u2 += s.u[i] * s.u[i];
    usum += s.u[i];
  }

  double f_eff = 0.0;
  const std::string e = row.effort;
  if (e == "dc") {
    f_eff = row.c1 * u2;
  } else if (e == "ctc") {
    f_eff = row.c1 * u2 + row.c2 * (s.tau_dot[0] * s.tau_dot[0] + s.tau_dot[1] * s.tau_dot[1]);
  } else if (e == "jac") {
    f_eff = row.c1 * u2 + row.c2 * (s.qacc[0] * s.qacc[0] + s.qacc[1] * s.qacc[1]);
  } else if (e == "ejk") {
    const auto clamp01 = [](double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); };
    const double r_energy = clamp01(usum / kNumMuscles / norm.scale_energy);
    const double r_jerk =
        clamp01((s.jerk[0] * s.jerk[0] + s.jerk[1] * s.jerk[1]) / norm.scale_jerk);
    const double r_work = clamp01(s.work_inc / norm.scale_work);
    f_eff = (row.c1 * r_energy + row.c2 * r_jerk + row.c3 * r_work) / (row.c1 + row.c2 + row.c3);
  }

  return 1.0 * f_bonus - 1.0 * f_dist - row.w_effort * f_eff;
}

}  // namespace reachlab::testing
