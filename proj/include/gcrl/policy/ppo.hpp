#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcrl/core/error.hpp"
#include "gcrl/core/rng.hpp"
#include "gcrl/policy/mlp.hpp"

namespace gcrl::policy {

using json = nlohmann::json;

struct PPOConfig {
  double learning_rate = 1e-4;
  double gamma = 0.99;
  int rollout_len = 32;
  double clip_epsilon = 0.1;
  int batch_size = 1024;
  int epochs = 1;
  double entropy_coef = 0.003;
  double value_coef = 0.5;
  double gae_lambda = 0.95;
  int workers = 4;
  int envs_per_worker = 8;
  int hidden_width = 256;
  int hidden_layers = 2;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("ppo.learning_rate must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("ppo.gamma must lie in (0, 1]");
    if (!(gae_lambda > 0.0 && gae_lambda <= 1.0)) throw ConfigError("ppo.gae_lambda must lie in (0, 1]");
    if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) throw ConfigError("ppo.clip_epsilon must lie in (0, 1)");
    if (rollout_len < 1) throw ConfigError("ppo.rollout_len must be >= 1");
    if (batch_size < 1) throw ConfigError("ppo.batch_size must be >= 1");
    if (epochs < 1) throw ConfigError("ppo.epochs must be >= 1");
    if (workers < 1 || envs_per_worker < 1) throw ConfigError("ppo.workers and ppo.envs_per_worker must be >= 1");
    if (hidden_width < 1 || hidden_layers < 1) throw ConfigError("ppo.hidden_width and ppo.hidden_layers must be >= 1");
    if (entropy_coef < 0.0 || value_coef < 0.0) throw ConfigError("ppo loss coefficients must be >= 0");
  }
};

inline json to_json(const PPOConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"gamma", c.gamma},
          {"rollout_len", c.rollout_len},     {"clip_epsilon", c.clip_epsilon},
          {"batch_size", c.batch_size},       {"epochs", c.epochs},
          {"entropy_coef", c.entropy_coef},   {"value_coef", c.value_coef},
          {"gae_lambda", c.gae_lambda},       {"workers", c.workers},
          {"envs_per_worker", c.envs_per_worker}, {"hidden_width", c.hidden_width},
          {"hidden_layers", c.hidden_layers}, {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},       {"adam_eps", c.adam_eps}};
}

inline PPOConfig ppo_config_from_json(const json& j) {
  PPOConfig c;
  c.learning_rate = j.at("learning_rate");
  c.gamma = j.at("gamma");
  c.rollout_len = j.at("rollout_len");
  c.clip_epsilon = j.at("clip_epsilon");
  c.batch_size = j.at("batch_size");
  c.epochs = j.at("epochs");
  c.entropy_coef = j.at("entropy_coef");
  c.value_coef = j.at("value_coef");
  c.gae_lambda = j.at("gae_lambda");
  c.workers = j.at("workers");
  c.envs_per_worker = j.at("envs_per_worker");
  c.hidden_width = j.at("hidden_width");
  c.hidden_layers = j.at("hidden_layers");
  c.adam_beta1 = j.at("adam_beta1");
  c.adam_beta2 = j.at("adam_beta2");
  c.adam_eps = j.at("adam_eps");
  c.validate();
  return c;
}

// FNV-1a over a canonical string.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Actor and critic MLPs sharing one flat parameter vector (actor first).
class Policy {
 public:
  Policy() = default;
  Policy(int obs_dim, int num_actions, int hidden_width = 256, int hidden_layers = 2) {
    std::vector<int> hidden(static_cast<std::size_t>(hidden_layers), hidden_width);
    actor_ = {obs_dim, hidden, num_actions};
    critic_ = {obs_dim, hidden, 1};
    theta_ = VectorXd::Zero(static_cast<Eigen::Index>(actor_.num_params() + critic_.num_params()));
  }

  static Policy make(int obs_dim, int num_actions, const PPOConfig& cfg, Rng& rng) {
    Policy p(obs_dim, num_actions, cfg.hidden_width, cfg.hidden_layers);
    p.init_orthogonal(rng);
    return p;
  }

  // Gains: sqrt(2) for hidden layers, 0.01 for the actor head, 1 for the
  // critic head.
  void init_orthogonal(Rng& rng) {
    mlp_init_orthogonal(actor_, actor_params(), rng, std::sqrt(2.0), 0.01);
    mlp_init_orthogonal(critic_, critic_params(), rng, std::sqrt(2.0), 1.0);
  }

  const MlpShape& actor_shape() const { return actor_; }
  const MlpShape& critic_shape() const { return critic_; }
  int obs_dim() const { return actor_.in; }
  int num_actions() const { return actor_.out; }

  VectorXd& theta() { return theta_; }
  const VectorXd& theta() const { return theta_; }
  double* actor_params() { return theta_.data(); }
  const double* actor_params() const { return theta_.data(); }
  double* critic_params() { return theta_.data() + actor_.num_params(); }
  const double* critic_params() const { return theta_.data() + actor_.num_params(); }

  void check_finite() const {
    if (!theta_.allFinite()) throw NumericError("policy parameters contain NaN or Inf");
  }

  MatrixXd logits(const MatrixXd& X, MlpCache* cache = nullptr) const {
    return mlp_forward(actor_, actor_params(), X, cache);
  }
  VectorXd values(const MatrixXd& X, MlpCache* cache = nullptr) const {
    return mlp_forward(critic_, critic_params(), X, cache).row(0).transpose();
  }

 private:
  MlpShape actor_;
  MlpShape critic_;
  VectorXd theta_;
};

struct ActResult {
  int action = 0;
  double log_prob = 0.0;
  double value = 0.0;
};

// Samples a ~ softmax(logits) for each column of X, drawing column j from
// *rngs[j].
inline std::vector<ActResult> act_batch(const Policy& policy, const MatrixXd& X, std::span<Rng* const> rngs,
                                        bool greedy = false) {
  if (X.rows() != policy.obs_dim()) throw ConfigError("observation dimension does not match the policy");
  if (static_cast<Eigen::Index>(rngs.size()) != X.cols()) throw ConfigError("one rng per column is required");
  policy.check_finite();
  const MatrixXd lp = log_softmax_columns(policy.logits(X));
  const VectorXd v = policy.values(X);
  std::vector<ActResult> out(static_cast<std::size_t>(X.cols()));
  std::vector<double> probs(static_cast<std::size_t>(lp.rows()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    int a = 0;
    if (greedy) {
      lp.col(j).maxCoeff(&a);
    } else {
      for (Eigen::Index i = 0; i < lp.rows(); ++i) probs[static_cast<std::size_t>(i)] = std::exp(lp(i, j));
      a = static_cast<int>(rngs[static_cast<std::size_t>(j)]->categorical(probs));
    }
    out[static_cast<std::size_t>(j)] = {a, lp(a, j), v(j)};
  }
  return out;
}

inline ActResult act(const Policy& policy, std::span<const double> obs, Rng& rng, bool greedy = false) {
  const MatrixXd X = ConstVecMap(obs.data(), static_cast<Eigen::Index>(obs.size()));
  Rng* r = &rng;
  return act_batch(policy, X, std::span<Rng* const>(&r, 1), greedy).front();
}

struct AdvantageEstimates {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// dones[t] marks that the episode ended after step t; `bootstrap` is V of the
// state following the last step (ignored when that step ended an episode).
inline AdvantageEstimates compute_gae(std::span<const double> rewards, std::span<const double> values,
                                      std::span<const std::uint8_t> dones, double bootstrap, double gamma,
                                      double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw ConfigError("trajectory fields differ in length");
  AdvantageEstimates out{std::vector<double>(n), std::vector<double>(n)};
  double next_value = bootstrap;
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double live = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_value * live - values[t];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + values[t];
    next_value = values[t];
  }
  return out;
}

// (A - mean) / max(std, 1e-8) with the population standard deviation.
inline void normalize_advantages(std::vector<double>& adv) {
  if (adv.size() < 2) return;
  const double n = static_cast<double>(adv.size());
  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  const double div = std::max(sd, 1e-8);
  for (double& a : adv) a = (a - mean) / div;
}

struct Batch {
  MatrixXd obs;  // obs_dim x N
  std::vector<int> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return actions.size(); }

  Batch subset(std::span<const std::size_t> idx) const {
    Batch b;
    b.obs.resize(obs.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      b.obs.col(static_cast<Eigen::Index>(k)) = obs.col(static_cast<Eigen::Index>(idx[k]));
      b.actions.push_back(actions[idx[k]]);
      b.old_log_probs.push_back(old_log_probs[idx[k]]);
      b.advantages.push_back(advantages[idx[k]]);
      b.returns.push_back(returns[idx[k]]);
    }
    return b;
  }
};

struct LossReport {
  double total = 0.0;
  double policy = 0.0;   // -E[min(rho A, clip(rho) A)]
  double value = 0.0;    // E[(V - R)^2]
  double entropy = 0.0;  // E[H]
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

// Per-sample surrogate min(rho A, clip(rho, 1-eps, 1+eps) A) and its
// derivative with respect to rho.
inline double clipped_surrogate(double rho, double adv, double eps, double* d_rho = nullptr) {
  const double clipped = std::clamp(rho, 1.0 - eps, 1.0 + eps);
  const bool saturated = (adv >= 0.0 && rho > 1.0 + eps) || (adv < 0.0 && rho < 1.0 - eps);
  if (d_rho) *d_rho = saturated ? 0.0 : adv;
  return std::min(rho * adv, clipped * adv);
}

// Loss = policy + value_coef * value - entropy_coef * entropy. When `grad` is
// given it receives dLoss/dtheta (overwritten).
inline LossReport ppo_loss(const Policy& policy, const Batch& batch, const PPOConfig& cfg, VectorXd* grad = nullptr) {
  const std::size_t n = batch.size();
  if (n == 0) throw ConfigError("empty batch");
  if (batch.old_log_probs.size() != n || batch.advantages.size() != n || batch.returns.size() != n ||
      static_cast<std::size_t>(batch.obs.cols()) != n) {
    throw ConfigError("batch fields differ in length");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  MlpCache actor_cache, critic_cache;
  const MatrixXd logits = policy.logits(batch.obs, grad ? &actor_cache : nullptr);
  const VectorXd v = policy.values(batch.obs, grad ? &critic_cache : nullptr);
  const MatrixXd lp = log_softmax_columns(logits);
  const MatrixXd p = lp.array().exp();

  LossReport r;
  MatrixXd d_logits = MatrixXd::Zero(logits.rows(), logits.cols());
  MatrixXd d_v(1, static_cast<Eigen::Index>(n));
  int clipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    const int a = batch.actions[i];
    const double logp = lp(a, j);
    const double rho = std::exp(logp - batch.old_log_probs[i]);
    double d_rho = 0.0;
    const double surr = clipped_surrogate(rho, batch.advantages[i], cfg.clip_epsilon, &d_rho);
    if (d_rho == 0.0 && batch.advantages[i] != 0.0) ++clipped;
    const double h = -(p.col(j).array() * lp.col(j).array()).sum();
    const double err = v(j) - batch.returns[i];
    r.policy -= surr * inv_n;
    r.value += err * err * inv_n;
    r.entropy += h * inv_n;
    r.approx_kl += (batch.old_log_probs[i] - logp) * inv_n;
    if (grad) {
      // d(-surr)/dlogit = -d_rho * rho * (onehot(a) - p)
      const double g_logp = -d_rho * rho * inv_n;
      d_logits.col(j) = -g_logp * p.col(j);
      d_logits(a, j) += g_logp;
      // d(-c_e H)/dlogit_k = c_e * p_k (log p_k + H)
      d_logits.col(j).array() += cfg.entropy_coef * inv_n * p.col(j).array() * (lp.col(j).array() + h);
      d_v(0, j) = cfg.value_coef * 2.0 * err * inv_n;
    }
  }
  r.total = r.policy + cfg.value_coef * r.value - cfg.entropy_coef * r.entropy;
  r.clip_fraction = clipped * inv_n;
  if (grad) {
    grad->setZero(policy.theta().size());
    mlp_backward(policy.actor_shape(), policy.actor_params(), actor_cache, d_logits, grad->data());
    mlp_backward(policy.critic_shape(), policy.critic_params(), critic_cache, d_v,
                 grad->data() + policy.actor_shape().num_params());
  }
  return r;
}

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : m_(VectorXd::Zero(static_cast<Eigen::Index>(n))),
        v_(VectorXd::Zero(static_cast<Eigen::Index>(n))),
        beta1_(beta1),
        beta2_(beta2),
        eps_(eps) {}

  void step(VectorXd& theta, const VectorXd& grad, double lr) {
    if (theta.size() != m_.size() || grad.size() != m_.size()) throw ConfigError("Adam state size mismatch");
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    theta.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
  }

  long steps() const { return t_; }

 private:
  VectorXd m_, v_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

// One PPO update: `epochs` passes over shuffled minibatches of batch_size.
// The returned report averages the minibatch reports. Non-finite loss or
// gradient leaves the parameters untouched and raises NumericError.
inline LossReport ppo_update(Policy& policy, Adam& adam, const Batch& batch, const PPOConfig& cfg, Rng& rng) {
  std::vector<std::size_t> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  LossReport mean;
  int count = 0;
  VectorXd grad;
  for (int e = 0; e < cfg.epochs; ++e) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t start = 0; start < idx.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t len = std::min(idx.size() - start, static_cast<std::size_t>(cfg.batch_size));
      const Batch mb = len == idx.size() && cfg.epochs == 1 ? batch : batch.subset({idx.data() + start, len});
      const LossReport r = ppo_loss(policy, mb, cfg, &grad);
      if (!std::isfinite(r.total) || !grad.allFinite()) {
        throw NumericError("non-finite PPO loss (policy=" + std::to_string(r.policy) +
                           ", value=" + std::to_string(r.value) + ", entropy=" + std::to_string(r.entropy) + ")");
      }
      adam.step(policy.theta(), grad, cfg.learning_rate);
      mean.total += r.total;
      mean.policy += r.policy;
      mean.value += r.value;
      mean.entropy += r.entropy;
      mean.approx_kl += r.approx_kl;
      mean.clip_fraction += r.clip_fraction;
      ++count;
    }
  }
  const double inv = 1.0 / count;
  mean.total *= inv;
  mean.policy *= inv;
  mean.value *= inv;
  mean.entropy *= inv;
  mean.approx_kl *= inv;
  mean.clip_fraction *= inv;
  policy.check_finite();
  return mean;
}

inline constexpr int kCheckpointVersion = 1;

inline json checkpoint_json(const Policy& policy, const json& run_config) {
  const std::string canon = run_config.dump();
  const VectorXd& th = policy.theta();
  return {{"version", kCheckpointVersion},
          {"config", run_config},
          {"config_hash", fnv1a(canon)},
          {"obs_dim", policy.obs_dim()},
          {"num_actions", policy.num_actions()},
          {"hidden", policy.actor_shape().hidden},
          {"theta", std::vector<double>(th.data(), th.data() + th.size())}};
}

inline void save_checkpoint(const std::string& path, const Policy& policy, const json& run_config) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out << checkpoint_json(policy, run_config).dump() << '\n';
}

struct Checkpoint {
  Policy policy;
  json config;
};

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.value("version", 0) != kCheckpointVersion) throw Error("unsupported checkpoint version");
  if (j.at("config_hash").get<std::uint64_t>() != fnv1a(j.at("config").dump())) {
    throw Error("checkpoint config hash mismatch");
  }
  const auto hidden = j.at("hidden").get<std::vector<int>>();
  if (hidden.empty()) throw Error("checkpoint has no hidden layers");
  Checkpoint c{Policy(j.at("obs_dim"), j.at("num_actions"), hidden.front(), static_cast<int>(hidden.size())),
               j.at("config")};
  const auto theta = j.at("theta").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(theta.size()) != c.policy.theta().size()) throw Error("checkpoint parameter count mismatch");
  c.policy.theta() = ConstVecMap(theta.data(), static_cast<Eigen::Index>(theta.size()));
  c.policy.check_finite();
  return c;
}

}  // namespace gcrl::policy
