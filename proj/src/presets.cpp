#include "reachlab/presets.hpp"

#include <stdexcept>

namespace reachlab {

namespace {

RewardSpec make(int id, EffortModel effort, double w_effort, double c1, double c2, double c3,
                DistanceModel distance, double b) {
  RewardSpec s;
  s.id = std::to_string(id);
  s.effort = effort;
  s.w_effort = w_effort;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = c3;
  s.distance = distance;
  s.bonus_b = b;
  s.w_bonus = 1.0;
  s.w_distance = 1.0;
  s.validate();
  return s;
}

std::vector<RewardSpec> build_grid() {
  using D = DistanceModel;
  using E = EffortModel;
  std::vector<RewardSpec> g;
  g.reserve(60);

  // ids 1..6: EJK, distance cycling exp/abs/sq, bonus 8 then 0
  const D cycle[3] = {D::exponential, D::absolute, D::squared};
  for (int i = 0; i < 6; ++i)
    g.push_back(make(1 + i, E::ejk, 0.8, 1, 8, 1, cycle[i % 3], i < 3 ? 8 : 0));
  // ids 7..12: JAC
  for (int i = 0; i < 6; ++i)
    g.push_back(make(7 + i, E::jac, 0.1, 0.0198, 6.67e-5, 0, cycle[i % 3], i < 3 ? 8 : 0));
  // ids 13..18: CTC
  for (int i = 0; i < 6; ++i)
    g.push_back(make(13 + i, E::ctc, 0.01, 0.649, 0.0177, 0, cycle[i % 3], i < 3 ? 8 : 0));
  // ids 19..24: DC
  for (int i = 0; i < 6; ++i)
    g.push_back(make(19 + i, E::dc, 0.01, 0.1477, 0, 0, cycle[i % 3], i < 3 ? 8 : 0));
  // ids 25..30: no effort
  for (int i = 0; i < 6; ++i)
    g.push_back(make(25 + i, E::zero, 0, 0, 0, 0, cycle[i % 3], i < 3 ? 8 : 0));
  // ids 31..32: bonus only
  g.push_back(make(31, E::zero, 0, 0, 0, 0, D::none, 8));
  g.push_back(make(32, E::zero, 0, 0, 0, 0, D::none, 50));
  // ids 33..35: EJK plus bonus, no distance
  g.push_back(make(33, E::ejk, 0.8, 1, 8, 1, D::none, 1));
  g.push_back(make(34, E::ejk, 0.8, 1, 8, 1, D::none, 8));
  g.push_back(make(35, E::ejk, 0.8, 1, 8, 1, D::none, 50));
  // ids 36..43: EJK effort-weight ladder, exponential distance
  const double ejk_w[8] = {16, 8, 4, 1.6, 0.4, 0.16, 0.08, 0.04};
  for (int i = 0; i < 8; ++i)
    g.push_back(make(36 + i, E::ejk, ejk_w[i], 1, 8, 1, D::exponential, 8));
  // ids 44..47: JAC variants
  g.push_back(make(44, E::jac, 1, 0.0198, 6.67e-5, 0, D::exponential, 8));
  g.push_back(make(45, E::jac, 1, 0.0198, 6.67e-5, 0, D::exponential, 0));
  g.push_back(make(46, E::jac, 0.01, 0.0198, 6.67e-5, 0, D::exponential, 8));
  g.push_back(make(47, E::jac, 0.01, 0.0198, 6.67e-4, 0, D::exponential, 8));
  // ids 48..51: CTC variants
  g.push_back(make(48, E::ctc, 1, 0.649, 0.0177, 0, D::exponential, 8));
  g.push_back(make(49, E::ctc, 1, 0.649, 0.0177, 0, D::exponential, 0));
  g.push_back(make(50, E::ctc, 0.1, 0.649, 0.0177, 0, D::exponential, 8));
  g.push_back(make(51, E::ctc, 0.001, 0.649, 0.0177, 0, D::exponential, 8));
  // ids 52..60: DC variants; 55 and 56 are identical in the source table
  g.push_back(make(52, E::dc, 1, 0.1477, 0, 0, D::exponential, 8));
  g.push_back(make(53, E::dc, 1, 0.1477, 0, 0, D::exponential, 0));
  g.push_back(make(54, E::dc, 0.001, 0.1477, 0, 0, D::exponential, 8));
  g.push_back(make(55, E::dc, 1, 0.0001, 0, 0, D::exponential, 8));
  g.push_back(make(56, E::dc, 1, 0.0001, 0, 0, D::exponential, 8));
  g.push_back(make(57, E::dc, 5, 0.0001, 0, 0, D::exponential, 8));
  g.push_back(make(58, E::dc, 10, 0.0001, 0, 0, D::exponential, 8));
  g.push_back(make(59, E::dc, 50, 0.0001, 0, 0, D::exponential, 8));
  g.push_back(make(60, E::dc, 100, 0.0001, 0, 0, D::exponential, 8));
  return g;
}

}  // namespace

const std::vector<RewardSpec>& reward_grid() {
  static const std::vector<RewardSpec> grid = build_grid();
  return grid;
}

const RewardSpec& reward_grid_entry(int id) {
  const auto& g = reward_grid();
  if (id < 1 || id > static_cast<int>(g.size()))
    throw std::out_of_range("reward grid id out of range: " + std::to_string(id));
  return g[static_cast<std::size_t>(id - 1)];
}

}  // namespace reachlab
