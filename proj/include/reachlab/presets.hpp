#pragma once

#include <vector>

#include "reachlab/reward.hpp"

namespace reachlab {

// The 60 bundled reward configurations, keyed by id 1..60.
// ids 55 and 56 are intentionally identical; both are kept verbatim.
const std::vector<RewardSpec>& reward_grid();

// Entry by id (1-based). Throws std::out_of_range for ids outside 1..60.
const RewardSpec& reward_grid_entry(int id);

}  // namespace reachlab
