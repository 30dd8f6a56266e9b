#include "reachlab/run_config.hpp"

#include <stdexcept>

namespace reachlab {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(where + ": bad value for '" + std::string(key) + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (id.empty()) throw std::invalid_argument("run config: id must be nonempty");
  if (replicates < 1) throw std::invalid_argument("run '" + id + "': replicates must be >= 1");
  reward.validate();
  train.validate();
  env.validate();
  normalizer.validate();
}

nlohmann::json to_json(const RewardSpec& s) {
  return json{{"w_bonus", s.w_bonus}, {"w_distance", s.w_distance}, {"w_effort", s.w_effort},
              {"bonus", s.bonus_b},   {"distance", to_string(s.distance)},
              {"effort", to_string(s.effort)}, {"c1", s.c1}, {"c2", s.c2}, {"c3", s.c3}};
}

RewardSpec reward_spec_from_json(const json& j, const std::string& where) {
  check_keys(j, {"w_bonus", "w_distance", "w_effort", "bonus", "distance", "effort", "c1", "c2", "c3"},
             where);
  RewardSpec s;
  get_if(j, "w_bonus", s.w_bonus, where);
  get_if(j, "w_distance", s.w_distance, where);
  get_if(j, "w_effort", s.w_effort, where);
  get_if(j, "bonus", s.bonus_b, where);
  get_if(j, "c1", s.c1, where);
  get_if(j, "c2", s.c2, where);
  get_if(j, "c3", s.c3, where);
  try {
    if (j.contains("distance")) s.distance = distance_model_from_string(j.at("distance").get<std::string>());
    if (j.contains("effort")) s.effort = effort_model_from_string(j.at("effort").get<std::string>());
    s.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  return s;
}

nlohmann::json to_json(const TrainConfig& c) {
  return json{{"total_steps", c.total_steps},
              {"rollout_length", c.rollout_length},
              {"minibatch_size", c.minibatch_size},
              {"epochs", c.epochs},
              {"gamma", c.gamma},
              {"gae_lambda", c.gae_lambda},
              {"clip_ratio", c.clip_ratio},
              {"learning_rate", c.learning_rate},
              {"entropy_coef", c.entropy_coef},
              {"seed", c.seed},
              {"num_envs", c.num_envs}};
}

TrainConfig train_config_from_json(const json& j, const std::string& where) {
  check_keys(j,
             {"total_steps", "rollout_length", "minibatch_size", "epochs", "gamma", "gae_lambda",
              "clip_ratio", "learning_rate", "entropy_coef", "seed", "num_envs"},
             where);
  TrainConfig c;
  get_if(j, "total_steps", c.total_steps, where);
  get_if(j, "rollout_length", c.rollout_length, where);
  get_if(j, "minibatch_size", c.minibatch_size, where);
  get_if(j, "epochs", c.epochs, where);
  get_if(j, "gamma", c.gamma, where);
  get_if(j, "gae_lambda", c.gae_lambda, where);
  get_if(j, "clip_ratio", c.clip_ratio, where);
  get_if(j, "learning_rate", c.learning_rate, where);
  get_if(j, "entropy_coef", c.entropy_coef, where);
  get_if(j, "seed", c.seed, where);
  get_if(j, "num_envs", c.num_envs, where);
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  return c;
}

nlohmann::json to_json(const EnvParams& e) {
  json arm{{"l1", e.arm.l1},
           {"l2", e.arm.l2},
           {"m1", e.arm.m1},
           {"m2", e.arm.m2},
           {"damping", e.arm.damping},
           {"max_force", e.arm.max_force},
           {"moment_arm", e.arm.moment_arm},
           {"tau_act", e.arm.tau_act},
           {"dt_physics", e.arm.dt_physics},
           {"dt_control", e.arm.dt_control},
           {"gravity", e.arm.gravity},
           {"q_min", e.arm.q_min},
           {"q_max", e.arm.q_max}};
  json buttons = json::array();
  for (const auto& p : e.layout.positions) buttons.push_back({p.x(), p.y()});
  json layout{{"buttons", buttons}, {"radius", e.layout.radius}, {"colours", e.layout.colours}};
  return json{{"arm", arm},
              {"layout", layout},
              {"press_speed", e.press_speed},
              {"trial_timeout", e.trial_timeout},
              {"episode_clicks", e.episode_clicks},
              {"max_trials", e.max_trials}};
}

EnvParams env_params_from_json(const json& j, const std::string& where) {
  check_keys(j, {"arm", "layout", "press_speed", "trial_timeout", "episode_clicks", "max_trials"},
             where);
  EnvParams e;
  if (j.contains("arm")) {
    const json& a = j.at("arm");
    check_keys(a,
               {"l1", "l2", "m1", "m2", "damping", "max_force", "moment_arm", "tau_act",
                "dt_physics", "dt_control", "gravity", "q_min", "q_max"},
               where + ".arm");
    get_if(a, "l1", e.arm.l1, where);
    get_if(a, "l2", e.arm.l2, where);
    get_if(a, "m1", e.arm.m1, where);
    get_if(a, "m2", e.arm.m2, where);
    get_if(a, "damping", e.arm.damping, where);
    get_if(a, "max_force", e.arm.max_force, where);
    get_if(a, "moment_arm", e.arm.moment_arm, where);
    get_if(a, "tau_act", e.arm.tau_act, where);
    get_if(a, "dt_physics", e.arm.dt_physics, where);
    get_if(a, "dt_control", e.arm.dt_control, where);
    get_if(a, "gravity", e.arm.gravity, where);
    get_if(a, "q_min", e.arm.q_min, where);
    get_if(a, "q_max", e.arm.q_max, where);
  }
  if (j.contains("layout")) {
    const json& l = j.at("layout");
    check_keys(l, {"buttons", "radius", "colours"}, where + ".layout");
    if (l.contains("buttons")) {
      const json& b = l.at("buttons");
      if (!b.is_array() || b.size() != kNumButtons)
        throw std::invalid_argument(where + ".layout: buttons must list exactly 4 positions");
      for (int i = 0; i < kNumButtons; ++i) {
        const auto xy = b.at(i).get<std::array<double, 2>>();
        e.layout.positions[static_cast<std::size_t>(i)] = Vec2(xy[0], xy[1]);
      }
    }
    get_if(l, "radius", e.layout.radius, where);
    get_if(l, "colours", e.layout.colours, where);
  }
  get_if(j, "press_speed", e.press_speed, where);
  get_if(j, "trial_timeout", e.trial_timeout, where);
  get_if(j, "episode_clicks", e.episode_clicks, where);
  get_if(j, "max_trials", e.max_trials, where);
  try {
    e.validate();
  } catch (const std::exception& ex) {
    throw std::invalid_argument(where + ": " + ex.what());
  }
  return e;
}

nlohmann::json to_json(const EffortNormalizer& n) {
  return json{{"scale_energy", n.scale_energy}, {"scale_jerk", n.scale_jerk}, {"scale_work", n.scale_work}};
}

EffortNormalizer normalizer_from_json(const json& j, const std::string& where) {
  check_keys(j, {"scale_energy", "scale_jerk", "scale_work"}, where);
  EffortNormalizer n;
  get_if(j, "scale_energy", n.scale_energy, where);
  get_if(j, "scale_jerk", n.scale_jerk, where);
  get_if(j, "scale_work", n.scale_work, where);
  try {
    n.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  return n;
}

nlohmann::json to_json(const RunConfig& r) {
  return json{{"id", r.id},
              {"reward", to_json(r.reward)},
              {"train", to_json(r.train)},
              {"env", to_json(r.env)},
              {"normalizer", to_json(r.normalizer)},
              {"replicates", r.replicates}};
}

RunConfig run_config_from_json(const json& j, const std::string& where) {
  check_keys(j, {"id", "reward", "train", "env", "normalizer", "replicates"}, where);
  RunConfig r;
  if (!j.contains("id") || !j.at("id").is_string())
    throw std::invalid_argument(where + ": every run needs a string id");
  r.id = j.at("id").get<std::string>();
  const std::string my = where + " (id '" + r.id + "')";
  if (j.contains("reward")) r.reward = reward_spec_from_json(j.at("reward"), my + ".reward");
  if (j.contains("train")) r.train = train_config_from_json(j.at("train"), my + ".train");
  if (j.contains("env")) r.env = env_params_from_json(j.at("env"), my + ".env");
  if (j.contains("normalizer")) r.normalizer = normalizer_from_json(j.at("normalizer"), my + ".normalizer");
  get_if(j, "replicates", r.replicates, my);
  try {
    r.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(my + ": " + e.what());
  }
  return r;
}

std::uint64_t run_seed(std::uint64_t global_seed, const std::string& run_id) {
  return global_seed ^ fnv1a(run_id.data(), run_id.size());
}

}  // namespace reachlab
