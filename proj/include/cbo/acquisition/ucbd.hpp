#pragma once

#include <cstddef>
#include <cstdint>

#include "cbo/acquisition/bundle.hpp"
#include "cbo/common.hpp"
#include "cbo/optim/box.hpp"

namespace cbo::acq {

struct UcbdConfig {
  double delta_conf = 0.1;
  int domain_size = 4096;    ///< |X|: number of Sobol points in the search grid
  double penalty_rho = -1e6;  ///< alpha outside the optimistic feasible set
  Vector costs;               ///< (K+1) evaluation costs, index 0 = objective
  std::uint64_t grid_seed = 0;

  void validate(std::size_t num_constraints) const;
};

/// rho = -1e6 * (1 + max |observed objective|).
double default_penalty_rho(const Vector& objective_observations);

/// beta = 2 log[(|G| + 1) |X| t^2 pi^2 / (6 delta)].
double ucbd_beta(std::size_t num_constraints, int domain_size, int t, double delta_conf);

struct UcbdDecision {
  Vector x_star;
  std::size_t task = 0;
  bool optimistic_set_empty = false;
};

/// Selects the location by maximizing the objective's upper bound over the optimistic
/// feasible set and the task by the relaxed-feasibility test. With an empty optimistic set
/// the least-violated grid point is used and its worst cost-scaled constraint is queried.
UcbdDecision ucbd_step(const ModelBundle& bundle, int t, const UcbdConfig& cfg, const optim::Box& box);

}  // namespace cbo::acq
