#pragma once

#include <string>

#include "reachlab/policy.hpp"
#include "reachlab/run_config.hpp"

namespace reachlab {

// Versioned JSON container for a trained (or in-progress) policy together
// with everything needed to reproduce and evaluate it.
struct Checkpoint {
  std::int64_t step = 0;
  TrainConfig train;
  RewardSpec reward;
  EffortNormalizer normalizer;
  EnvParams env;
  PolicyParams policy;
};

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace reachlab
