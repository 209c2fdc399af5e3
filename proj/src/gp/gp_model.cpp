#include "cbo/gp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cbo::gp {

GpModel GpModel::condition(KernelParams params, Matrix train_x, Vector train_y, double prior_mean) {
  params.validate();
  if (train_x.rows() != train_y.size() || train_x.rows() == 0) {
    throw std::invalid_argument("GpModel::condition: need a non-empty, consistent training set");
  }
  if (train_x.cols() != params.lengthscales.size()) {
    throw std::invalid_argument("GpModel::condition: input dimension does not match lengthscales");
  }
  if (!train_y.allFinite() || !train_x.allFinite()) {
    throw std::invalid_argument("GpModel::condition: non-finite training data");
  }
  GpModel m;
  m.params_ = std::move(params);
  m.train_x_ = std::move(train_x);
  m.train_y_ = std::move(train_y);
  m.prior_mean_ = prior_mean;

  const Matrix K = gram(m.params_, m.train_x_);
  const auto n = K.rows();
  for (double noise = m.params_.effective_noise(); noise <= kJitterCeiling * (1.0 + 1e-12); noise *= 10.0) {
    Eigen::LLT<Matrix> llt(K + noise * Matrix::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      m.noise_ = noise;
      m.factor_ = llt.matrixL();
      m.alpha_ = llt.solve(m.train_y_ - Vector::Constant(n, prior_mean));
      return m;
    }
  }
  throw NumericalError("GpModel::condition: Cholesky failed after jitter escalation to " +
                       std::to_string(kJitterCeiling));
}

double GpModel::clamp_variance(double variance, double prior) {
  if (variance < 0.0) {
    if (variance < -1e-8 * std::max(1.0, prior)) {
      throw NumericalError("posterior variance is significantly negative: " + std::to_string(variance));
    }
    return 0.0;
  }
  return std::min(variance, prior);
}

Vector GpModel::half_solve(const Vector& cross) const {
  return factor_.triangularView<Eigen::Lower>().solve(cross);
}

Prediction GpModel::posterior(const Vector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("GpModel::posterior: dimension mismatch");
  const Vector k = cross_covariance(params_, train_x_, x);
  const Vector h = half_solve(k);
  const double prior = params_.signal_variance;
  return {prior_mean_ + k.dot(alpha_), clamp_variance(prior - h.squaredNorm(), prior)};
}

double GpModel::posterior_mean(const Vector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("GpModel::posterior_mean: dimension mismatch");
  double mean = prior_mean_;
  for (Eigen::Index i = 0; i < train_x_.rows(); ++i) {
    mean += alpha_[i] * kernel_from_r2(params_, weighted_r2(params_, train_x_.row(i), x));
  }
  return mean;
}

double GpModel::posterior_covariance(const Vector& a, const Vector& b) const {
  if (a.size() != dim() || b.size() != dim()) {
    throw std::invalid_argument("GpModel::posterior_covariance: dimension mismatch");
  }
  const Vector ha = half_solve(cross_covariance(params_, train_x_, a));
  const Vector hb = half_solve(cross_covariance(params_, train_x_, b));
  return kernel_eval(params_, a, b) - ha.dot(hb);
}

FantasyModel::FantasyModel(const GpModel& base, Vector x, double y)
    : base_(&base), x_(std::move(x)), y_(y) {
  if (x_.size() != base.dim()) throw std::invalid_argument("FantasyModel: dimension mismatch");
  const Vector k = cross_covariance(base.params(), base.train_x(), x_);
  half_x_ = base.half_solve(k);
  mean_x_ = base.prior_mean() + k.dot(base.alpha());
  const double prior = base.params().signal_variance;
  innovation_variance_ = GpModel::clamp_variance(prior - half_x_.squaredNorm(), prior) + base.noise();
}

Prediction FantasyModel::posterior(const Vector& q) const {
  const GpModel& m = *base_;
  if (q.size() != m.dim()) throw std::invalid_argument("FantasyModel::posterior: dimension mismatch");
  const Vector k = cross_covariance(m.params(), m.train_x(), q);
  const Vector h = m.half_solve(k);
  const double prior = m.params().signal_variance;
  const double mean = m.prior_mean() + k.dot(m.alpha());
  const double var = prior - h.squaredNorm();
  const double cov = kernel_eval(m.params(), q, x_) - h.dot(half_x_);
  return {mean + cov * (y_ - mean_x_) / innovation_variance_,
          GpModel::clamp_variance(var - cov * cov / innovation_variance_, prior)};
}

FantasyModel condition_on_fantasy(const GpModel& model, const Vector& x, double y) {
  return FantasyModel(model, x, y);
}

}  // namespace cbo::gp
