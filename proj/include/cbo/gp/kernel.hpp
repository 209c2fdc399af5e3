#pragma once

#include "cbo/common.hpp"

namespace cbo::gp {

enum class KernelFamily { Matern52, SquaredExponential };

/// Noise floor added to the diagonal even for noiseless data.
inline constexpr double kJitterFloor = 1e-4;
/// Largest noise the factorization may escalate to before giving up.
inline constexpr double kJitterCeiling = 1e-1;

struct KernelParams {
  double signal_variance = 1.0;
  Vector lengthscales;  ///< one per input dimension (ARD)
  double noise_variance = kJitterFloor;
  KernelFamily family = KernelFamily::Matern52;

  /// Throws std::invalid_argument on non-positive variances or lengthscales.
  void validate() const;
  /// Noise actually placed on the diagonal: never below the jitter floor.
  double effective_noise() const { return noise_variance < kJitterFloor ? kJitterFloor : noise_variance; }
};

/// Stationary covariance k(a, b) without the noise term. Matern-5/2 uses
/// s (1 + sqrt5 r + 5 r^2 / 3) exp(-sqrt5 r), squared exponential s exp(-r^2 / 2), with r the
/// lengthscale-weighted Euclidean distance.
double kernel_eval(const KernelParams& params, const Vector& a, const Vector& b);

/// Covariance as a function of the squared weighted distance; no argument checks.
double kernel_from_r2(const KernelParams& params, double r2);

/// Squared weighted distance; accepts rows or columns without copying.
template <class A, class B>
double weighted_r2(const KernelParams& params, const Eigen::MatrixBase<A>& a,
                   const Eigen::MatrixBase<B>& b) {
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double z = (a(i) - b(i)) / params.lengthscales[i];
    r2 += z * z;
  }
  return r2;
}

/// Gram matrix of the rows of X (no noise).
Matrix gram(const KernelParams& params, const Matrix& X);

/// Vector of k(X_i, x) over the rows of X.
Vector cross_covariance(const KernelParams& params, const Matrix& X, const Vector& x);

}  // namespace cbo::gp
