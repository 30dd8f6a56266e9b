#include "reachlab/trainer.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "reachlab/checkpoint.hpp"

namespace reachlab {

void TrainConfig::validate() const {
  if (total_steps < rollout_length) throw std::invalid_argument("train: total_steps < rollout_length");
  if (rollout_length <= 0 || minibatch_size <= 0 || epochs <= 0 || num_envs <= 0)
    throw std::invalid_argument("train: sizes must be positive");
  if (rollout_length % num_envs != 0)
    throw std::invalid_argument("train: rollout_length must be divisible by num_envs");
  if (rollout_length % minibatch_size != 0)
    throw std::invalid_argument("train: rollout_length must be divisible by minibatch_size");
  if (!(gamma >= 0 && gamma <= 1) || !(gae_lambda >= 0 && gae_lambda <= 1))
    throw std::invalid_argument("train: gamma and gae_lambda must be in [0,1]");
  if (!(clip_ratio > 0)) throw std::invalid_argument("train: clip_ratio must be positive");
  if (!(learning_rate > 0)) throw std::invalid_argument("train: learning_rate must be positive");
  if (entropy_coef < 0) throw std::invalid_argument("train: entropy_coef must be nonnegative");
}

std::uint64_t TrainingLog::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](const void* p, std::size_t n) { h = fnv1a(p, n, h); };
  for (const UpdateRecord& r : updates) {
    mix(&r.step, sizeof r.step);
    mix(&r.mean_return, sizeof r.mean_return);
    mix(&r.success_count, sizeof r.success_count);
    mix(&r.policy_loss, sizeof r.policy_loss);
    mix(&r.value_loss, sizeof r.value_loss);
    mix(&r.entropy, sizeof r.entropy);
  }
  return h;
}

Eigen::VectorXd policy_flatten(const PolicyParams& p) {
  const Eigen::VectorXd a = p.actor.flatten();
  const Eigen::VectorXd c = p.critic.flatten();
  Eigen::VectorXd theta(a.size() + p.log_std.size() + c.size());
  theta << a, p.log_std, c;
  return theta;
}

void policy_unflatten(PolicyParams& p, const Eigen::VectorXd& theta) {
  const int na = p.actor.num_params();
  const int ns = static_cast<int>(p.log_std.size());
  const int nc = p.critic.num_params();
  if (theta.size() != na + ns + nc) throw std::invalid_argument("policy_unflatten: size mismatch");
  p.actor.unflatten(theta.segment(0, na));
  p.log_std = theta.segment(na, ns);
  p.critic.unflatten(theta.segment(na + ns, nc));
}

PpoLossStats ppo_loss_and_grad(const PolicyParams& params, const PpoBatch& batch,
                               const TrainConfig& cfg, Eigen::VectorXd* grad) {
  const int n = static_cast<int>(batch.obs.cols());
  const int act_dim = static_cast<int>(params.log_std.size());
  if (batch.actions.cols() != n || batch.logprob_old.size() != n || batch.advantages.size() != n ||
      batch.returns.size() != n)
    throw std::invalid_argument("ppo: inconsistent batch");

  Mlp::Cache actor_cache, critic_cache;
  const Eigen::MatrixXd mean = params.actor.forward_cached(batch.obs, actor_cache);
  const Eigen::MatrixXd value = params.critic.forward_cached(batch.obs, critic_cache);

  const Eigen::ArrayXd std = params.log_std.array().exp();
  const Eigen::ArrayXd inv_var = (-2.0 * params.log_std.array()).exp();

  // Per-sample Gaussian log densities of the stored pre-squash actions.
  Eigen::VectorXd logp(n);
  const double log2pi = std::log(2.0 * M_PI);
  for (int b = 0; b < n; ++b) {
    const Eigen::ArrayXd d = batch.actions.col(b).array() - mean.col(b).array();
    logp[b] = -0.5 * (d.square() * inv_var).sum() - params.log_std.sum() -
              0.5 * act_dim * log2pi;
  }

  PpoLossStats stats;
  // Entropy of a diagonal Gaussian; state independent.
  stats.entropy = params.log_std.sum() + 0.5 * act_dim * (1.0 + log2pi);

  Eigen::VectorXd dlogp = Eigen::VectorXd::Zero(n);  // dL/dlogp_new per sample
  double policy_loss = 0.0;
  for (int b = 0; b < n; ++b) {
    const double adv = batch.advantages[b];
    const double ratio = std::exp(logp[b] - batch.logprob_old[b]);
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
    const double l1 = -adv * ratio;
    const double l2 = -adv * clipped;
    if (l1 >= l2) {
      policy_loss += l1;
      dlogp[b] = -adv * ratio / n;
    } else {
      policy_loss += l2;  // clip active: zero gradient through the ratio
    }
  }
  stats.policy_loss = policy_loss / n;

  const Eigen::VectorXd verr = value.row(0).transpose() - batch.returns;
  stats.value_loss = 0.5 * verr.squaredNorm() / n;
  stats.total = stats.policy_loss + TrainConfig::kValueCoef * stats.value_loss -
                cfg.entropy_coef * stats.entropy;

  if (grad != nullptr) {
    Mlp::Grads ga = params.actor.zero_grads();
    Mlp::Grads gc = params.critic.zero_grads();
    Eigen::VectorXd g_logstd = Eigen::VectorXd::Constant(act_dim, -cfg.entropy_coef);

    Eigen::MatrixXd d_mean(act_dim, n);
    for (int b = 0; b < n; ++b) {
      const Eigen::ArrayXd d = batch.actions.col(b).array() - mean.col(b).array();
      // dlogp/dmean = d / var ; dlogp/dlog_std = d^2 / var - 1
      d_mean.col(b) = dlogp[b] * (d * inv_var).matrix();
      g_logstd += dlogp[b] * (d.square() * inv_var - 1.0).matrix();
    }
    params.actor.backward(actor_cache, d_mean, ga);

    Eigen::MatrixXd d_value = (TrainConfig::kValueCoef / n) * verr.transpose();
    params.critic.backward(critic_cache, d_value, gc);

    Eigen::VectorXd fa = Mlp::flatten_grads(ga);
    Eigen::VectorXd fc = Mlp::flatten_grads(gc);
    grad->resize(fa.size() + act_dim + fc.size());
    *grad << fa, g_logstd, fc;
  }
  return stats;
}

namespace {

struct RolloutBuffer {
  Eigen::MatrixXd obs;      // obs_dim x n
  Eigen::MatrixXd actions;  // act_dim x n
  Eigen::VectorXd logprob;
  std::vector<double> rewards;
  std::vector<std::uint8_t> terminals;
  std::vector<double> values;

  void resize(int obs_dim, int act_dim, int n) {
    obs.resize(obs_dim, n);
    actions.resize(act_dim, n);
    logprob.resize(n);
    rewards.assign(static_cast<std::size_t>(n), 0.0);
    terminals.assign(static_cast<std::size_t>(n), 0);
    values.assign(static_cast<std::size_t>(n), 0.0);
  }
};

}  // namespace

TrainResult train(const std::function<ChoiceReactionEnv()>& env_factory, const RewardSpec& spec,
                  const EffortNormalizer& norm, const TrainConfig& cfg,
                  const std::string& checkpoint_dir) {
  cfg.validate();
  spec.validate();
  norm.validate();

  const int num_envs = cfg.num_envs;
  const int per_env = cfg.rollout_length / num_envs;
  const std::int64_t num_updates = cfg.num_updates();

  std::vector<ChoiceReactionEnv> envs;
  envs.reserve(static_cast<std::size_t>(num_envs));
  for (int i = 0; i < num_envs; ++i) envs.push_back(env_factory());

  PolicyParams params = make_policy(envs[0].params(), cfg.seed);
  const int obs_dim = Observation::kDim;
  const int act_dim = kNumMuscles;

  Rng action_rng(Rng::derive(cfg.seed, 0xAC7));
  Rng shuffle_rng(Rng::derive(cfg.seed, 0x5F0));

  std::vector<std::uint64_t> episode_counter(static_cast<std::size_t>(num_envs), 0);
  const auto reset_seed = [&](int env_idx) {
    return Rng::derive(cfg.seed, 0xE000000ULL + static_cast<std::uint64_t>(env_idx) * 1000003ULL +
                                     episode_counter[static_cast<std::size_t>(env_idx)]);
  };

  std::vector<Observation> obs(static_cast<std::size_t>(num_envs));
  std::vector<double> episode_return(static_cast<std::size_t>(num_envs), 0.0);
  for (int i = 0; i < num_envs; ++i) obs[static_cast<std::size_t>(i)] = envs[static_cast<std::size_t>(i)].reset(reset_seed(i));

  Eigen::VectorXd theta = policy_flatten(params);
  Adam adam(static_cast<int>(theta.size()));

  RolloutBuffer buf;
  buf.resize(obs_dim, act_dim, cfg.rollout_length);
  std::vector<double> bootstrap(static_cast<std::size_t>(num_envs), 0.0);

  TrainResult result;
  result.log.updates.reserve(static_cast<std::size_t>(num_updates));

  const std::int64_t checkpoint_every = std::max<std::int64_t>(1, num_updates / 5);
  if (!checkpoint_dir.empty()) std::filesystem::create_directories(checkpoint_dir);
  const auto write_checkpoint = [&](std::int64_t step, const std::string& name) {
    if (checkpoint_dir.empty()) return;
    Checkpoint ck;
    ck.step = step;
    ck.train = cfg;
    ck.reward = spec;
    ck.normalizer = norm;
    ck.env = envs[0].params();
    ck.policy = params;
    save_checkpoint(ck, checkpoint_dir + "/" + name);
  };

  std::int64_t global_step = 0;
  for (std::int64_t update = 0; update < num_updates; ++update) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> finished_returns;
    int success_count = 0;

    // Rollout: all workers advance in lockstep; batch index = t * num_envs + i
    // keeps assembly order independent of any scheduling.
    for (int t = 0; t < per_env; ++t) {
      for (int i = 0; i < num_envs; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const int col = t * num_envs + i;
        const Eigen::VectorXd x = params.norm.apply(obs[si].flatten());
        buf.obs.col(col) = x;
        buf.values[static_cast<std::size_t>(col)] = params.critic.forward(x)[0];

        Eigen::VectorXd z;
        double logp = 0.0;
        const MuscleCommand cmd = act(params, obs[si], false, action_rng, &z, &logp);
        buf.actions.col(col) = z;
        buf.logprob[col] = logp;

        auto res = envs[si].step(cmd);
        const RewardBreakdown rb = composite(spec, res.snapshot, norm);
        buf.rewards[static_cast<std::size_t>(col)] = rb.total;
        episode_return[si] += rb.total;
        if (res.snapshot.pressed_correct) ++success_count;

        const bool terminal = res.status == StepStatus::episode_done;
        buf.terminals[static_cast<std::size_t>(col)] = terminal ? 1 : 0;
        if (terminal) {
          finished_returns.push_back(episode_return[si]);
          episode_return[si] = 0.0;
          ++episode_counter[si];
          obs[si] = envs[si].reset(reset_seed(i));
        } else {
          obs[si] = res.obs;
        }
      }
    }
    global_step += cfg.rollout_length;
    for (int i = 0; i < num_envs; ++i)
      bootstrap[static_cast<std::size_t>(i)] =
          params.critic.forward(params.norm.apply(obs[static_cast<std::size_t>(i)].flatten()))[0];

    // Per-worker GAE on the strided views, assembled back in buffer order.
    Eigen::VectorXd advantages(cfg.rollout_length), returns(cfg.rollout_length);
    {
      std::vector<double> r(static_cast<std::size_t>(per_env)), v(static_cast<std::size_t>(per_env) + 1);
      std::vector<std::uint8_t> term(static_cast<std::size_t>(per_env));
      for (int i = 0; i < num_envs; ++i) {
        for (int t = 0; t < per_env; ++t) {
          const std::size_t col = static_cast<std::size_t>(t * num_envs + i);
          r[static_cast<std::size_t>(t)] = buf.rewards[col];
          v[static_cast<std::size_t>(t)] = buf.values[col];
          term[static_cast<std::size_t>(t)] = buf.terminals[col];
        }
        v[static_cast<std::size_t>(per_env)] = bootstrap[static_cast<std::size_t>(i)];
        const GaeResult g = compute_advantages(r, v, term, cfg.gamma, cfg.gae_lambda);
        for (int t = 0; t < per_env; ++t) {
          const int col = t * num_envs + i;
          advantages[col] = g.advantages[static_cast<std::size_t>(t)];
          returns[col] = g.returns[static_cast<std::size_t>(t)];
        }
      }
    }

    // Batch-level advantage normalization.
    const double adv_mean = advantages.mean();
    const double adv_std = std::sqrt((advantages.array() - adv_mean).square().sum() /
                                     static_cast<double>(cfg.rollout_length));
    advantages = (advantages.array() - adv_mean) / (adv_std + 1e-8);

    // Minibatched clipped-gradient epochs.
    std::vector<int> order(static_cast<std::size_t>(cfg.rollout_length));
    std::iota(order.begin(), order.end(), 0);
    double policy_loss_sum = 0.0, value_loss_sum = 0.0, entropy_sum = 0.0;
    int loss_batches = 0;
    PpoBatch mb;
    const int n_mb = cfg.rollout_length / cfg.minibatch_size;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (int k = static_cast<int>(order.size()) - 1; k > 0; --k)
        std::swap(order[static_cast<std::size_t>(k)],
                  order[static_cast<std::size_t>(shuffle_rng.uniform_int(k + 1))]);
      for (int m = 0; m < n_mb; ++m) {
        const int begin = m * cfg.minibatch_size;
        mb.obs.resize(obs_dim, cfg.minibatch_size);
        mb.actions.resize(act_dim, cfg.minibatch_size);
        mb.logprob_old.resize(cfg.minibatch_size);
        mb.advantages.resize(cfg.minibatch_size);
        mb.returns.resize(cfg.minibatch_size);
        for (int k = 0; k < cfg.minibatch_size; ++k) {
          const int idx = order[static_cast<std::size_t>(begin + k)];
          mb.obs.col(k) = buf.obs.col(idx);
          mb.actions.col(k) = buf.actions.col(idx);
          mb.logprob_old[k] = buf.logprob[idx];
          mb.advantages[k] = advantages[idx];
          mb.returns[k] = returns[idx];
        }
        Eigen::VectorXd grad;
        const PpoLossStats stats = ppo_loss_and_grad(params, mb, cfg, &grad);
        if (!std::isfinite(stats.total))
          throw std::runtime_error(
              "train: non-finite loss at update " + std::to_string(update) + " (policy=" +
              std::to_string(stats.policy_loss) + ", value=" + std::to_string(stats.value_loss) + ")");
        adam.step(theta, grad, cfg.learning_rate);
        // keep log-std within its documented band
        const int na = params.actor.num_params();
        for (int i = 0; i < act_dim; ++i)
          theta[na + i] = std::clamp(theta[na + i], kLogStdMin, kLogStdMax);
        policy_unflatten(params, theta);
        policy_loss_sum += stats.policy_loss;
        value_loss_sum += stats.value_loss;
        entropy_sum += stats.entropy;
        ++loss_batches;
      }
    }

    UpdateRecord rec;
    rec.step = global_step;
    rec.mean_return = finished_returns.empty()
                          ? std::numeric_limits<double>::quiet_NaN()
                          : std::accumulate(finished_returns.begin(), finished_returns.end(), 0.0) /
                                static_cast<double>(finished_returns.size());
    rec.success_count = success_count;
    rec.policy_loss = policy_loss_sum / loss_batches;
    rec.value_loss = value_loss_sum / loss_batches;
    rec.entropy = entropy_sum / loss_batches;
    rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.log.updates.push_back(rec);

    if ((update + 1) % checkpoint_every == 0 && update + 1 < num_updates)
      write_checkpoint(global_step, "checkpoint_" + std::to_string(global_step) + ".json");
  }

  write_checkpoint(global_step, "checkpoint_final.json");
  result.params = params;
  return result;
}

}  // namespace reachlab
