#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gcrl/core/error.hpp"
#include "gcrl/core/rng.hpp"

namespace gcrl::policy {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstMatMap = Eigen::Map<const MatrixXd>;
using MatMap = Eigen::Map<MatrixXd>;
using ConstVecMap = Eigen::Map<const VectorXd>;
using VecMap = Eigen::Map<VectorXd>;

// Fully connected ReLU network described by its layer widths. Parameters
// live in a caller-owned flat buffer, layer by layer: W (out x in,
// column-major) then b (out).
struct MlpShape {
  int in = 0;
  std::vector<int> hidden;
  int out = 0;

  int layers() const { return static_cast<int>(hidden.size()) + 1; }
  int fan_in(int l) const { return l == 0 ? in : hidden[static_cast<std::size_t>(l - 1)]; }
  int fan_out(int l) const { return l == layers() - 1 ? out : hidden[static_cast<std::size_t>(l)]; }

  std::size_t offset(int l) const {
    std::size_t off = 0;
    for (int k = 0; k < l; ++k) off += static_cast<std::size_t>(fan_out(k)) * (fan_in(k) + 1);
    return off;
  }
  std::size_t num_params() const { return offset(layers()); }

  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

// Activations kept for the backward pass: acts[0] is the input, acts[l] the
// rectified output of hidden layer l.
struct MlpCache {
  std::vector<MatrixXd> acts;
};

// X holds one sample per column. Returns out x N.
inline MatrixXd mlp_forward(const MlpShape& s, const double* p, const MatrixXd& X, MlpCache* cache = nullptr) {
  if (X.rows() != s.in) throw ConfigError("network input has the wrong dimension");
  MatrixXd h = X;
  if (cache) {
    cache->acts.clear();
    cache->acts.push_back(X);
  }
  for (int l = 0; l < s.layers(); ++l) {
    const std::size_t off = s.offset(l);
    const ConstMatMap W(p + off, s.fan_out(l), s.fan_in(l));
    const ConstVecMap b(p + off + static_cast<std::size_t>(s.fan_out(l)) * s.fan_in(l), s.fan_out(l));
    MatrixXd z = W * h;
    z.colwise() += b;
    if (l + 1 < s.layers()) {
      h = z.cwiseMax(0.0);
      if (cache) cache->acts.push_back(h);
    } else {
      h = std::move(z);
    }
  }
  return h;
}

// Accumulates dLoss/dparams into `grad` given dLoss/dOutput (out x N).
inline void mlp_backward(const MlpShape& s, const double* p, const MlpCache& cache, const MatrixXd& dY, double* grad) {
  MatrixXd delta = dY;
  for (int l = s.layers() - 1; l >= 0; --l) {
    const std::size_t off = s.offset(l);
    const int fo = s.fan_out(l), fi = s.fan_in(l);
    const MatrixXd& a = cache.acts[static_cast<std::size_t>(l)];
    MatMap(grad + off, fo, fi).noalias() += delta * a.transpose();
    VecMap(grad + off + static_cast<std::size_t>(fo) * fi, fo) += delta.rowwise().sum();
    if (l == 0) break;
    const ConstMatMap W(p + off, fo, fi);
    MatrixXd back = W.transpose() * delta;
    delta = (a.array() > 0.0).select(back, 0.0);
  }
}

// Orthogonal matrix scaled by `gain` (rows x cols), from the QR factor of a
// Gaussian matrix with signs fixed by diag(R).
inline MatrixXd orthogonal(int rows, int cols, double gain, Rng& rng) {
  const bool tall = rows >= cols;
  const int r = tall ? rows : cols, c = tall ? cols : rows;
  MatrixXd g(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(r, c);
  const MatrixXd R = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  for (int j = 0; j < c; ++j) {
    if (R(j, j) < 0.0) q.col(j) *= -1.0;
  }
  q *= gain;
  return tall ? q : MatrixXd(q.transpose());
}

inline void mlp_init_orthogonal(const MlpShape& s, double* p, Rng& rng, double hidden_gain, double out_gain) {
  for (int l = 0; l < s.layers(); ++l) {
    const std::size_t off = s.offset(l);
    const int fo = s.fan_out(l), fi = s.fan_in(l);
    MatMap(p + off, fo, fi) = orthogonal(fo, fi, l + 1 < s.layers() ? hidden_gain : out_gain, rng);
    VecMap(p + off + static_cast<std::size_t>(fo) * fi, fo).setZero();
  }
}

// Row-wise softmax over columns of logits (A x N).
inline MatrixXd softmax_columns(const MatrixXd& logits) {
  MatrixXd p = logits;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const double m = p.col(j).maxCoeff();
    p.col(j) = (p.col(j).array() - m).exp();
    p.col(j) /= p.col(j).sum();
  }
  return p;
}

inline MatrixXd log_softmax_columns(const MatrixXd& logits) {
  MatrixXd lp = logits;
  for (Eigen::Index j = 0; j < lp.cols(); ++j) {
    const double m = lp.col(j).maxCoeff();
    const double lse = m + std::log((lp.col(j).array() - m).exp().sum());
    lp.col(j).array() -= lse;
  }
  return lp;
}

}  // namespace gcrl::policy
