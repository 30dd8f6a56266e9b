#include "reachlab/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace reachlab {

Mlp::Mlp(std::vector<int> sizes, Rng& rng, double out_scale) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("mlp: need at least input and output sizes");
  const std::size_t layers = sizes_.size() - 1;
  w_.resize(layers);
  b_.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = sizes_[l], fan_out = sizes_[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out)) * (l + 1 == layers ? out_scale : 1.0);
    w_[l].resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w_[l](r, c) = rng.uniform(-bound, bound);
    b_[l] = Eigen::VectorXd::Zero(fan_out);
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    h = (w_[l] * h + b_[l]).eval();
    if (l + 1 < w_.size()) h = h.array().tanh();
  }
  return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    h = ((w_[l] * h).colwise() + b_[l]).eval();
    if (l + 1 < w_.size()) h = h.array().tanh();
  }
  return h;
}

Eigen::MatrixXd Mlp::forward_cached(const Eigen::MatrixXd& x, Cache& cache) const {
  cache.acts.clear();
  cache.acts.reserve(w_.size() + 1);
  cache.acts.push_back(x);
  for (std::size_t l = 0; l < w_.size(); ++l) {
    Eigen::MatrixXd h = (w_[l] * cache.acts.back()).colwise() + b_[l];
    if (l + 1 < w_.size()) h = h.array().tanh();
    cache.acts.push_back(std::move(h));
  }
  return cache.acts.back();
}

Mlp::Grads Mlp::zero_grads() const {
  Grads g;
  g.dw.reserve(w_.size());
  g.db.reserve(b_.size());
  for (std::size_t l = 0; l < w_.size(); ++l) {
    g.dw.push_back(Eigen::MatrixXd::Zero(w_[l].rows(), w_[l].cols()));
    g.db.push_back(Eigen::VectorXd::Zero(b_[l].size()));
  }
  return g;
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dy, Grads& g) const {
  if (cache.acts.size() != w_.size() + 1) throw std::logic_error("mlp: backward without forward_cached");
  Eigen::MatrixXd delta = dy;  // dL/d(pre-activation of last layer): output is linear
  for (std::size_t l = w_.size(); l-- > 0;) {
    g.dw[l] += delta * cache.acts[l].transpose();
    g.db[l] += delta.rowwise().sum();
    if (l > 0) {
      // through tanh: acts[l] holds tanh(pre), so d tanh = 1 - acts^2
      delta = (w_[l].transpose() * delta).cwiseProduct(
          (1.0 - cache.acts[l].array().square()).matrix());
    }
  }
}

int Mlp::num_params() const {
  int n = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) n += static_cast<int>(w_[l].size() + b_[l].size());
  return n;
}

Eigen::VectorXd Mlp::flatten() const {
  Eigen::VectorXd theta(num_params());
  int at = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (int r = 0; r < w_[l].rows(); ++r)
      for (int c = 0; c < w_[l].cols(); ++c) theta[at++] = w_[l](r, c);
    for (int i = 0; i < b_[l].size(); ++i) theta[at++] = b_[l][i];
  }
  return theta;
}

void Mlp::unflatten(const Eigen::VectorXd& theta) {
  if (theta.size() != num_params()) throw std::invalid_argument("mlp: parameter vector size mismatch");
  int at = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (int r = 0; r < w_[l].rows(); ++r)
      for (int c = 0; c < w_[l].cols(); ++c) w_[l](r, c) = theta[at++];
    for (int i = 0; i < b_[l].size(); ++i) b_[l][i] = theta[at++];
  }
}

Eigen::VectorXd Mlp::flatten_grads(const Grads& g) {
  int n = 0;
  for (std::size_t l = 0; l < g.dw.size(); ++l) n += static_cast<int>(g.dw[l].size() + g.db[l].size());
  Eigen::VectorXd out(n);
  int at = 0;
  for (std::size_t l = 0; l < g.dw.size(); ++l) {
    for (int r = 0; r < g.dw[l].rows(); ++r)
      for (int c = 0; c < g.dw[l].cols(); ++c) out[at++] = g.dw[l](r, c);
    for (int i = 0; i < g.db[l].size(); ++i) out[at++] = g.db[l][i];
  }
  return out;
}

Adam::Adam(int n, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps), m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

void Adam::step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double lr) {
  if (grad.size() != m_.size()) throw std::invalid_argument("adam: gradient size mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  theta -= (lr / bc1) * m_.cwiseQuotient(((v_ / bc2).cwiseSqrt().array() + eps_).matrix());
}

}  // namespace reachlab
