#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cbo/common.hpp"
#include "cbo/optim/box.hpp"

namespace cbo::optim {

enum class LocalMethod { QuasiNewtonBounded, AdamProjected };

/// Function to maximize. `with_gradient` is optional; when absent, local search
/// falls back to central finite differences with h = 1e-6 * box width.
/// Both callables must be safe to invoke concurrently.
struct Objective {
  std::function<double(const Vector&)> value;
  std::function<double(const Vector&, Vector& gradient)> with_gradient;
};

struct MultistartConfig {
  int num_restarts = 15;
  int raw_samples = 72;
  LocalMethod method = LocalMethod::QuasiNewtonBounded;
  int max_iters = 100;
  std::vector<Vector> seed_points;

  /// Throws std::invalid_argument when the configuration cannot be honoured.
  void validate() const;
};

struct MaximizeResult {
  Vector x;
  double value = 0.0;
};

/// Evaluates f (and its gradient) at x, using finite differences that stay inside the box.
double value_and_gradient(const Objective& f, const Box& box, const Vector& x, Vector& gradient);

/// Bounded local ascent from x0. The returned point is the best one visited, so its
/// value is never below f(x0).
MaximizeResult local_maximize(const Objective& f, const Box& box, const Vector& x0,
                              LocalMethod method, int max_iters);

/// Multistart maximization: scores `raw_samples` scrambled Sobol points plus the seed
/// points, refines the best `num_restarts` of them and returns the incumbent. Equal
/// values resolve to the lowest restart index, so the result does not depend on the
/// number of worker threads.
MaximizeResult maximize(const Objective& f, const Box& box, const MultistartConfig& cfg,
                        std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace cbo::optim
