#pragma once

#include <Eigen/Dense>
#include <vector>

#include "reachlab/rng.hpp"

namespace reachlab {

// Fully connected network, tanh hidden layers, linear output. Batches are
// column-major: one sample per column.
class Mlp {
 public:
  Mlp() = default;
  // sizes = {in, hidden..., out}; out_scale shrinks the last layer's init.
  Mlp(std::vector<int> sizes, Rng& rng, double out_scale = 1.0);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  struct Cache {
    std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[i] = output of layer i
  };
  Eigen::MatrixXd forward_cached(const Eigen::MatrixXd& x, Cache& cache) const;

  struct Grads {
    std::vector<Eigen::MatrixXd> dw;
    std::vector<Eigen::VectorXd> db;
  };
  Grads zero_grads() const;
  // Accumulates parameter gradients for dL/dY into g.
  void backward(const Cache& cache, const Eigen::MatrixXd& dy, Grads& g) const;

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }

  // Flat parameter vector (layer order, weights row-major then bias).
  int num_params() const;
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& theta);
  static Eigen::VectorXd flatten_grads(const Grads& g);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> w_;
  std::vector<Eigen::VectorXd> b_;
};

// Adam over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  explicit Adam(int n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double lr);
  const Eigen::VectorXd& m() const { return m_; }
  const Eigen::VectorXd& v() const { return v_; }
  std::int64_t t() const { return t_; }

 private:
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  std::int64_t t_ = 0;
  Eigen::VectorXd m_, v_;
};

}  // namespace reachlab
