#pragma once

#include "cbo/common.hpp"
#include "cbo/gp/kernel.hpp"

namespace cbo::gp {

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;  ///< latent variance, clamped to [0, k(x,x)]
};

/// Conditioned Gaussian process with constant prior mean. Immutable once built,
/// so concurrent posterior queries are safe.
class GpModel {
 public:
  GpModel() = default;

  /// Factorizes K + noise I for the given hyperparameters. The diagonal noise starts at
  /// the effective noise and escalates x10 up to kJitterCeiling if Cholesky fails.
  static GpModel condition(KernelParams params, Matrix train_x, Vector train_y, double prior_mean = 0.0);

  Prediction posterior(const Vector& x) const;
  double posterior_mean(const Vector& x) const;
  /// Posterior covariance between two query points.
  double posterior_covariance(const Vector& a, const Vector& b) const;

  /// L^{-1} k(X, x) for the cached lower factor L.
  Vector half_solve(const Vector& cross) const;

  const KernelParams& params() const { return params_; }
  const Matrix& train_x() const { return train_x_; }
  const Vector& train_y() const { return train_y_; }
  const Matrix& cov_factor() const { return factor_; }
  const Vector& alpha() const { return alpha_; }
  double prior_mean() const { return prior_mean_; }
  /// Noise used on the diagonal after any jitter escalation.
  double noise() const { return noise_; }
  Eigen::Index dim() const { return params_.lengthscales.size(); }
  Eigen::Index size() const { return train_x_.rows(); }

  /// Applies the variance clamp: tiny negative round-off becomes 0, anything below
  /// -1e-8 * max(1, prior) raises NumericalError.
  static double clamp_variance(double variance, double prior);

 private:
  KernelParams params_;
  Matrix train_x_;
  Vector train_y_;
  double prior_mean_ = 0.0;
  double noise_ = kJitterFloor;
  Matrix factor_;
  Vector alpha_;
};

/// One-step lookahead: the base model conditioned on a single extra observation
/// (x, y) with frozen hyperparameters, evaluated by a rank-one update.
class FantasyModel {
 public:
  FantasyModel(const GpModel& base, Vector x, double y);

  Prediction posterior(const Vector& q) const;

  const GpModel& base() const { return *base_; }
  const Vector& fantasy_x() const { return x_; }
  double fantasy_y() const { return y_; }

 private:
  const GpModel* base_;
  Vector x_;
  double y_;
  Vector half_x_;
  double mean_x_;
  double innovation_variance_;  ///< sigma^2(x) + noise
};

FantasyModel condition_on_fantasy(const GpModel& model, const Vector& x, double y);

}  // namespace cbo::gp
