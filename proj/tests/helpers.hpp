#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cbo/acquisition/bundle.hpp"
#include "cbo/gp/kernel.hpp"
#include "cbo/gp/model.hpp"

namespace testing {

using cbo::Matrix;
using cbo::Vector;

inline Matrix uniform_points(std::mt19937_64& rng, int n, int d, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix X(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) X(i, j) = u(rng);
  }
  return X;
}

inline cbo::gp::KernelParams random_params(std::mt19937_64& rng, int d, cbo::gp::KernelFamily family) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cbo::gp::KernelParams p;
  p.family = family;
  p.signal_variance = 0.5 + 2.0 * u(rng);
  p.lengthscales = Vector(d);
  for (int j = 0; j < d; ++j) p.lengthscales[j] = 0.2 + 0.8 * u(rng);
  p.noise_variance = 1e-4;
  return p;
}

// Covariance written out directly rather than through the library's helpers.
inline double reference_kernel(const cbo::gp::KernelParams& p, const Vector& a, const Vector& b) {
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) r2 += std::pow((a[i] - b[i]) / p.lengthscales[i], 2);
  const double r = std::sqrt(r2);
  if (p.family == cbo::gp::KernelFamily::SquaredExponential) return p.signal_variance * std::exp(-0.5 * r2);
  return p.signal_variance * (1.0 + std::sqrt(5.0) * r + 5.0 * r2 / 3.0) * std::exp(-std::sqrt(5.0) * r);
}

struct DensePosterior {
  double mean;
  double variance;
};

// Textbook conditional Gaussian evaluated with an explicit inverse of K + noise I.
inline DensePosterior dense_posterior(const cbo::gp::KernelParams& p, const Matrix& X, const Vector& y,
                                      double prior_mean, double noise, const Vector& q) {
  const auto n = X.rows();
  Matrix K(n, n);
  Vector k(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k[i] = reference_kernel(p, X.row(i).transpose(), q);
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = reference_kernel(p, X.row(i).transpose(), X.row(j).transpose());
  }
  K.diagonal().array() += noise;
  const Matrix Kinv = K.fullPivLu().inverse();
  const Vector r = y.array() - prior_mean;
  return {prior_mean + k.dot(Kinv * r), reference_kernel(p, q, q) - k.dot(Kinv * k)};
}

// Conditions a model on one extra observation by rebuilding it from scratch.
inline cbo::gp::GpModel refit_with(const cbo::gp::GpModel& model, const Vector& x, double y) {
  Matrix X(model.size() + 1, model.dim());
  X.topRows(model.size()) = model.train_x();
  X.row(model.size()) = x.transpose();
  Vector Y(model.size() + 1);
  Y.head(model.size()) = model.train_y();
  Y[model.size()] = y;
  auto p = model.params();
  p.noise_variance = model.noise();
  return cbo::gp::GpModel::condition(p, X, Y, model.prior_mean());
}

}  // namespace testing
