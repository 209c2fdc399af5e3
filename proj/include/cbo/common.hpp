#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>

namespace cbo {

using Vector = Eigen::VectorXd;
/// Point sets are stored one point per row.
using Matrix = Eigen::MatrixXd;

/// Raised when a factorization or a numerical invariant fails beyond recovery.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Execution mode for the data-parallel kernels. Serial is the reference path.
enum class Execution { Serial, Parallel };

/// Runs body(i) for i in [0, n) with OpenMP when exec is Parallel. Each index must write
/// only its own output slot. The first exception thrown by any iteration is rethrown after
/// the loop completes.
template <class Body>
void parallel_for(long n, Execution exec, Body&& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel && n > 1)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Derives an independent 64-bit stream seed from a base seed and a salt (splitmix64).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace cbo
