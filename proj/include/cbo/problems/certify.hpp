#pragma once

#include "cbo/common.hpp"
#include "cbo/problems/problem.hpp"

namespace cbo::problems {

struct RefineConfig {
  int points_per_side = 11;   ///< local grid is points_per_side^d
  double min_radius = 1e-11;  ///< relative to the box width
  int max_rounds = 2000;
};

/// Ground-truth optimum for opportunity-cost scoring.
struct TrueOptimumCertificate {
  int grid_resolution = 0;
  double best_grid_value = 0.0;
  Vector best_grid_point;
  double value = 0.0;  ///< after refinement, maximization convention
  Vector location;
};

/// Feasibility-filtered dense grid (grid_resolution points per axis, endpoints included)
/// followed by a feasibility-preserving zoom search around the grid incumbent and a
/// gradient-projection polish along the active constraints. Throws
/// std::runtime_error when no grid point is feasible.
TrueOptimumCertificate certify_optimum(const ProblemDefinition& problem, int grid_resolution = 1000,
                                       const RefineConfig& refine = {}, Execution exec = Execution::Parallel);

}  // namespace cbo::problems
