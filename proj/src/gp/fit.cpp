#include "cbo/gp/fit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cbo/optim/maximize.hpp"
#include "cbo/optim/sampling.hpp"

namespace cbo::gp {

namespace {

constexpr double kMinDataVariance = 1e-8;

KernelParams unpack(const Vector& theta, KernelFamily family, NoiseMode mode, Eigen::Index d) {
  KernelParams p;
  p.family = family;
  p.signal_variance = std::exp(theta[0]);
  p.lengthscales = theta.segment(1, d).array().exp().matrix();
  p.noise_variance = mode == NoiseMode::Learned ? std::exp(theta[d + 1]) : kJitterFloor;
  return p;
}

}  // namespace

LikelihoodValue log_marginal_likelihood(const KernelParams& params, const Matrix& X, const Vector& y,
                                        NoiseMode noise_mode) {
  params.validate();
  const auto n = X.rows();
  const auto d = X.cols();
  if (n < 1 || y.size() != n || d != params.lengthscales.size()) {
    throw std::invalid_argument("log_marginal_likelihood: inconsistent data");
  }
  const double noise = params.effective_noise();
  const Matrix S = gram(params, X);
  Eigen::LLT<Matrix> llt(S + noise * Matrix::Identity(n, n));
  if (llt.info() != Eigen::Success) throw NumericalError("log_marginal_likelihood: Cholesky failed");

  const Vector alpha = llt.solve(y);
  const Matrix L = llt.matrixL();
  const double log_det = 2.0 * L.diagonal().array().log().sum();
  LikelihoodValue out;
  out.value = -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  // dL/dtheta = 0.5 tr((alpha alpha^T - K^{-1}) dK/dtheta)
  const Matrix W = alpha * alpha.transpose() - llt.solve(Matrix::Identity(n, n));
  const Eigen::Index n_params = 1 + d + (noise_mode == NoiseMode::Learned ? 1 : 0);
  out.gradient = Vector::Zero(n_params);
  const double s = params.signal_variance;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.gradient[0] += 0.5 * W(i, i) * s;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r2 = weighted_r2(params, X.row(i), X.row(j));
      double radial = 0.0;  // dk/d(log l_m) = radial * (diff_m / l_m)^2
      if (params.family == KernelFamily::SquaredExponential) {
        radial = s * std::exp(-0.5 * r2);
      } else {
        const double sr = std::sqrt(5.0 * r2);
        radial = s * (5.0 / 3.0) * (1.0 + sr) * std::exp(-sr);
      }
      out.gradient[0] += W(i, j) * kernel_from_r2(params, r2);
      for (Eigen::Index m = 0; m < d; ++m) {
        const double z = (X(i, m) - X(j, m)) / params.lengthscales[m];
        out.gradient[1 + m] += W(i, j) * radial * z * z;
      }
    }
  }
  if (noise_mode == NoiseMode::Learned) {
    // d(noise)/d(log noise) = noise; zero below the floor where the noise is clamped.
    const double dnoise = params.noise_variance >= kJitterFloor ? params.noise_variance : 0.0;
    out.gradient[1 + d] = 0.5 * W.trace() * dnoise;
  }
  return out;
}

GpModel fit(const Matrix& X, const Vector& y, const FitOptions& options) {
  const auto n = X.rows();
  const auto d = X.cols();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit: need at least two observations");
  if (!y.allFinite() || !X.allFinite()) throw std::invalid_argument("fit: non-finite training data");

  const double mean = y.mean();
  const Vector centred = y.array() - mean;
  const double data_var = std::max(centred.squaredNorm() / static_cast<double>(n), kMinDataVariance);

  Vector width(d);
  if (options.input_width) {
    if (options.input_width->size() != d) throw std::invalid_argument("fit: input_width dimension mismatch");
    width = *options.input_width;
  } else {
    width = (X.colwise().maxCoeff() - X.colwise().minCoeff()).transpose();
  }
  width = width.cwiseMax(1e-6);

  const bool learned = options.noise_mode == NoiseMode::Learned;
  const Eigen::Index n_params = 1 + d + (learned ? 1 : 0);
  Vector lo(n_params);
  Vector hi(n_params);
  lo[0] = std::log(1e-3 * data_var);
  hi[0] = std::log(1e3 * data_var);
  for (Eigen::Index m = 0; m < d; ++m) {
    lo[1 + m] = std::log(1e-2 * width[m]);
    hi[1 + m] = std::log(10.0 * width[m]);
  }
  if (learned) {
    lo[1 + d] = std::log(kJitterFloor);
    hi[1 + d] = std::log(std::max(data_var, 10.0 * kJitterFloor));
  }
  const optim::Box log_box(lo, hi);

  optim::Objective objective;
  objective.value = [&](const Vector& theta) {
    try {
      return log_marginal_likelihood(unpack(theta, options.family, options.noise_mode, d), X, centred,
                                     options.noise_mode)
          .value;
    } catch (const NumericalError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  objective.with_gradient = [&](const Vector& theta, Vector& grad) {
    try {
      auto lml = log_marginal_likelihood(unpack(theta, options.family, options.noise_mode, d), X, centred,
                                         options.noise_mode);
      grad = std::move(lml.gradient);
      return lml.value;
    } catch (const NumericalError&) {
      grad = Vector::Zero(theta.size());
      return -std::numeric_limits<double>::infinity();
    }
  };

  const Matrix starts = optim::lhs_sample(log_box, std::max(1, options.num_starts), options.seed);
  Vector best_theta;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index s = 0; s < starts.rows(); ++s) {
    const auto res = optim::local_maximize(objective, log_box, starts.row(s).transpose(),
                                           optim::LocalMethod::QuasiNewtonBounded, options.max_iters);
    if (std::isfinite(res.value) && res.value > best_value) {
      best_value = res.value;
      best_theta = res.x;
    }
  }
  if (best_theta.size() == 0) throw NumericalError("fit: likelihood could not be evaluated at any start");
  return GpModel::condition(unpack(best_theta, options.family, options.noise_mode, d), X, y, mean);
}

}  // namespace cbo::gp
