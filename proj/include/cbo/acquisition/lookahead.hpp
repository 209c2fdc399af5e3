#pragma once

#include <cstdint>
#include <optional>

#include "cbo/acquisition/bundle.hpp"
#include "cbo/acquisition/fantasy.hpp"
#include "cbo/common.hpp"
#include "cbo/optim/box.hpp"
#include "cbo/optim/maximize.hpp"

namespace cbo::acq {

/// Controls the inner maximization of the fantasy-updated utility (mu - M) * PF.
struct InnerConfig {
  /// raw_samples Sobol points form the shared candidate set; the best num_restarts
  /// candidates per fantasy are then refined for max_iters steps (0 = no refinement).
  optim::MultistartConfig search{15, 100, optim::LocalMethod::AdamProjected, 100, {}};
  /// Fixed discrete inner domain. When set it replaces the Sobol set and disables refinement.
  std::optional<Matrix> candidates;
  /// Value M credited to infeasible outcomes; 0 gives the plain mu * PF utility.
  double utility_offset = 0.0;
  std::uint64_t seed = 0;
  Execution exec = Execution::Parallel;
};

/// Shared candidate set for the inner maximization (without the injected seeds).
Matrix inner_base_candidates(const optim::Box& box, const InnerConfig& cfg);

/// Precomputes posterior quantities of every task on the inner candidate set (plus the
/// current recommendation x_r) so that each outer location costs one rank-one update per
/// task. The current recommendation and the outer location are always inner candidates.
class LookaheadEvaluator {
 public:
  LookaheadEvaluator(const ModelBundle& bundle, optim::Box box, Vector x_r, InnerConfig cfg);

  /// Average over the grid's fantasies of
  ///   max_{x'} (mu^{+}(x') - M) PF^{+}(x') - (mu(x_r) - M) PF^{+}(x_r).
  double expected_gain(const Vector& x, const FantasyGrid& grid) const;

  /// Coupled constrained KG over the 35 joint fantasies.
  double ckg(const Vector& x) const { return expected_gain(x, coupled_); }
  /// Single-source value for task `source`, divided by its cost.
  double dckg(const Vector& x, std::size_t source, double cost) const;

  const Matrix& candidates() const { return candidates_; }
  const Vector& recommendation() const { return x_r_; }
  std::size_t num_tasks() const { return bundle_->num_tasks(); }

 private:
  struct TaskCache {
    Vector mean;
    Vector variance;
    Matrix half;  ///< L^{-1} k(X, candidates)
  };
  struct TaskAtX {
    double mean = 0.0;
    double sd = 0.0;
    double innovation = 0.0;  ///< sigma^2(x) + noise
    Vector half;
    Vector cov;      ///< posterior covariance with x over candidates + x
    Vector mean_c;   ///< posterior mean over candidates + x
    Vector var_c;    ///< posterior variance over candidates + x
  };

  std::vector<TaskAtX> prepare(const Vector& x) const;
  double utility_on_candidate(const std::vector<TaskAtX>& at_x, const FantasyDescriptor& f, Eigen::Index i) const;
  double utility_at(const std::vector<TaskAtX>& at_x, const Vector& x, const FantasyDescriptor& f,
                    const Vector& q) const;
  double best_for_fantasy(const std::vector<TaskAtX>& at_x, const Vector& x, const FantasyDescriptor& f) const;

  const ModelBundle* bundle_;
  optim::Box box_;
  Vector x_r_;
  InnerConfig cfg_;
  Matrix candidates_;  ///< base candidates followed by x_r
  Eigen::Index xr_index_ = 0;
  std::vector<TaskCache> cache_;
  FantasyGrid coupled_;
  std::vector<FantasyGrid> single_;
  bool refine_ = false;
};

/// argmax of (mu - M) PF over the inner candidates plus `extra` (refined like a fantasy).
Vector current_best_location(const ModelBundle& bundle, const optim::Box& box, const InnerConfig& cfg,
                             const Vector& extra);

/// Unconstrained knowledge gradient (bundle must have K = 0), reported >= 0.
double kg(const ModelBundle& bundle, const Vector& x, const optim::Box& box, const InnerConfig& cfg);

/// Constrained KG with the current recommendation x_r in the subtrahend.
double ckg(const ModelBundle& bundle, const Vector& x, const Vector& x_r, const optim::Box& box,
           const InnerConfig& cfg);

/// Decoupled single-source value for task k in {0..K}, divided by its cost b_k.
double dckg_source(const ModelBundle& bundle, const Vector& x, std::size_t k, const Vector& x_r, double cost,
                   const optim::Box& box, const InnerConfig& cfg);

}  // namespace cbo::acq
