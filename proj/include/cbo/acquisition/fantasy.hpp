#pragma once

#include <cstddef>
#include <vector>

#include "cbo/acquisition/bundle.hpp"
#include "cbo/common.hpp"

namespace cbo::acq {

enum class FantasyMode { Coupled, SingleSource };

inline constexpr int kQuantileFantasies = 7;
inline constexpr int kConstraintDraws = 5;

/// Quantile levels (i - 0.5) / 7, i = 1..7: evenly spaced, symmetric about 0.5, tails excluded.
std::vector<double> quantile_levels();

/// One deterministic posterior realization. Entries of `z` are standard-normal scores per
/// task (index 0 = objective); NaN marks a task left at its current posterior. `values`
/// holds the matching fantasy observations mu + sigma * z when built at a location.
struct FantasyDescriptor {
  Vector z;
  Vector values;

  bool conditions(std::size_t task) const { return !std::isnan(z[static_cast<Eigen::Index>(task)]); }
};

struct FantasyGrid {
  FantasyMode mode = FantasyMode::Coupled;
  std::size_t source = 0;                 ///< conditioned task in SingleSource mode
  std::vector<double> objective_quantiles;
  Matrix constraint_draws;                ///< kConstraintDraws x K unit-interval values (Coupled only)
  std::vector<FantasyDescriptor> combined;
};

/// Location-independent scores. Coupled: 7 objective quantiles crossed with 5 Sobol rows
/// mapped through Phi^{-1} for the K constraints (35 descriptors, or 7 when K = 0). SingleSource: 7
/// quantiles for `source` only.
FantasyGrid fantasy_template(std::size_t num_constraints, FantasyMode mode, std::size_t source = 0);

/// The template above with fantasy observation values filled in from the posteriors at x.
FantasyGrid make_fantasy_grid(const ModelBundle& bundle, const Vector& x, FantasyMode mode,
                              std::size_t source = 0);

}  // namespace cbo::acq
