#include "reachlab/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace reachlab {

namespace {

using nlohmann::json;

json mlp_to_json(const Mlp& m) {
  const Eigen::VectorXd theta = m.flatten();
  return json{{"sizes", m.sizes()},
              {"weights", std::vector<double>(theta.data(), theta.data() + theta.size())}};
}

Mlp mlp_from_json(const json& j, const std::string& where) {
  const auto sizes = j.at("sizes").get<std::vector<int>>();
  const auto weights = j.at("weights").get<std::vector<double>>();
  Rng dummy(0);
  Mlp m(sizes, dummy);
  if (static_cast<int>(weights.size()) != m.num_params())
    throw std::invalid_argument(where + ": weight count does not match sizes");
  m.unflatten(Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<long>(weights.size())));
  return m;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
  json j{{"format", "reachlab-checkpoint"},
         {"version", kCheckpointVersion},
         {"step", ck.step},
         {"train", to_json(ck.train)},
         {"reward", to_json(ck.reward)},
         {"normalizer", to_json(ck.normalizer)},
         {"env", to_json(ck.env)},
         {"policy",
          {{"obs_offset", to_vec(ck.policy.norm.offset)},
           {"obs_scale", to_vec(ck.policy.norm.scale)},
           {"actor", mlp_to_json(ck.policy.actor)},
           {"log_std", to_vec(ck.policy.log_std)},
           {"critic", mlp_to_json(ck.policy.critic)}}}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << j.dump(1) << "\n";
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("checkpoint: " + path + " is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != "reachlab-checkpoint")
    throw std::runtime_error("checkpoint: " + path + " has unexpected format tag");
  if (j.value("version", -1) != kCheckpointVersion)
    throw std::runtime_error("checkpoint: " + path + " has unsupported version");
  Checkpoint ck;
  ck.step = j.at("step").get<std::int64_t>();
  ck.train = train_config_from_json(j.at("train"), path + ":train");
  ck.reward = reward_spec_from_json(j.at("reward"), path + ":reward");
  ck.normalizer = normalizer_from_json(j.at("normalizer"), path + ":normalizer");
  ck.env = env_params_from_json(j.at("env"), path + ":env");
  const json& p = j.at("policy");
  ck.policy.norm.offset = from_vec(p.at("obs_offset").get<std::vector<double>>());
  ck.policy.norm.scale = from_vec(p.at("obs_scale").get<std::vector<double>>());
  ck.policy.actor = mlp_from_json(p.at("actor"), path + ":actor");
  ck.policy.log_std = from_vec(p.at("log_std").get<std::vector<double>>());
  ck.policy.critic = mlp_from_json(p.at("critic"), path + ":critic");
  return ck;
}

}  // namespace reachlab
