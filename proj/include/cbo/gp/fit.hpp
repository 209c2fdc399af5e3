#pragma once

#include <cstdint>
#include <optional>

#include "cbo/common.hpp"
#include "cbo/gp/kernel.hpp"
#include "cbo/gp/model.hpp"

namespace cbo::gp {

enum class NoiseMode { JitterOnly, Learned };

struct FitOptions {
  KernelFamily family = KernelFamily::Matern52;
  NoiseMode noise_mode = NoiseMode::JitterOnly;
  int num_starts = 10;
  int max_iters = 100;
  std::uint64_t seed = 0x5eedULL;
  /// Per-dimension reference width for lengthscale bounds (usually the problem box
  /// width). Defaults to the range of the training inputs.
  std::optional<Vector> input_width;
};

/// Log marginal likelihood of zero-mean data y under `params`, with the gradient with
/// respect to (log signal_variance, log lengthscales..., [log noise_variance]). The noise
/// component is only present for NoiseMode::Learned.
struct LikelihoodValue {
  double value = 0.0;
  Vector gradient;
};

LikelihoodValue log_marginal_likelihood(const KernelParams& params, const Matrix& X, const Vector& y,
                                        NoiseMode noise_mode = NoiseMode::JitterOnly);

/// Maximum-likelihood fit. Targets are centred on their mean (restored in predictions)
/// and hyperparameters are searched in log space by multistart bounded quasi-Newton from a
/// Latin hypercube over the log-box. Deterministic for identical data and options.
GpModel fit(const Matrix& X, const Vector& y, const FitOptions& options = {});

}  // namespace cbo::gp
