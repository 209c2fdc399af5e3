#include "cbo/gp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace cbo::gp {

void KernelParams::validate() const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw std::invalid_argument("KernelParams: signal_variance must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("KernelParams: noise_variance must be non-negative");
  }
  if (lengthscales.size() == 0) throw std::invalid_argument("KernelParams: no lengthscales");
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
    if (!(lengthscales[i] > 0.0) || !std::isfinite(lengthscales[i])) {
      throw std::invalid_argument("KernelParams: lengthscales must be positive");
    }
  }
}

double kernel_from_r2(const KernelParams& params, double r2) {
  if (params.family == KernelFamily::SquaredExponential) {
    return params.signal_variance * std::exp(-0.5 * r2);
  }
  const double sr = std::sqrt(5.0 * r2);
  return params.signal_variance * (1.0 + sr + 5.0 * r2 / 3.0) * std::exp(-sr);
}

double kernel_eval(const KernelParams& params, const Vector& a, const Vector& b) {
  if (a.size() != params.lengthscales.size() || b.size() != params.lengthscales.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  return kernel_from_r2(params, weighted_r2(params, a, b));
}

Matrix gram(const KernelParams& params, const Matrix& X) {
  const auto n = X.rows();
  Matrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = params.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = kernel_from_r2(params, weighted_r2(params, X.row(i), X.row(j)));
      K(i, j) = k;
      K(j, i) = k;
    }
  }
  return K;
}

Vector cross_covariance(const KernelParams& params, const Matrix& X, const Vector& x) {
  Vector k(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    k[i] = kernel_from_r2(params, weighted_r2(params, X.row(i), x));
  }
  return k;
}

}  // namespace cbo::gp
