#pragma once

#include <json.hpp>
#include <string>

#include "reachlab/env.hpp"
#include "reachlab/reward.hpp"
#include "reachlab/trainer.hpp"

namespace reachlab {

// One fully specified experiment: reward function, training setup and any
// environment overrides. Replicates expand into independent seeded runs.
struct RunConfig {
  std::string id;
  RewardSpec reward;
  TrainConfig train;
  EnvParams env;
  EffortNormalizer normalizer;
  int replicates = 1;

  void validate() const;
};

// Strict JSON (de)serialization: unknown keys are rejected, missing keys fall
// back to defaults, invariants are checked on load. `where` names the
// offending entry in error messages.
nlohmann::json to_json(const RewardSpec& s);
RewardSpec reward_spec_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const EnvParams& e);
EnvParams env_params_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const EffortNormalizer& n);
EffortNormalizer normalizer_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const RunConfig& r);
RunConfig run_config_from_json(const nlohmann::json& j, const std::string& where);

// Per-run seed: global seed XOR a hash of the run id.
std::uint64_t run_seed(std::uint64_t global_seed, const std::string& run_id);

}  // namespace reachlab
