#include "cbo/acquisition/fantasy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/optim/sampling.hpp"

namespace cbo::acq {

std::vector<double> quantile_levels() {
  std::vector<double> levels(kQuantileFantasies);
  for (int i = 0; i < kQuantileFantasies; ++i) levels[static_cast<std::size_t>(i)] = (i + 0.5) / kQuantileFantasies;
  return levels;
}

FantasyGrid fantasy_template(std::size_t num_constraints, FantasyMode mode, std::size_t source) {
  const auto n_tasks = static_cast<Eigen::Index>(num_constraints + 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  FantasyGrid grid;
  grid.mode = mode;
  grid.source = source;
  grid.objective_quantiles = quantile_levels();
  std::vector<double> scores;
  for (double q : grid.objective_quantiles) scores.push_back(q == 0.5 ? 0.0 : normal_quantile(q));

  if (mode == FantasyMode::SingleSource) {
    if (source > num_constraints) throw std::invalid_argument("fantasy_template: source index out of range");
    for (double z : scores) {
      FantasyDescriptor f{Vector::Constant(n_tasks, nan), Vector::Constant(n_tasks, nan)};
      f.z[static_cast<Eigen::Index>(source)] = z;
      grid.combined.push_back(std::move(f));
    }
    return grid;
  }

  grid.constraint_draws = Matrix(kConstraintDraws, static_cast<Eigen::Index>(num_constraints));
  if (num_constraints > 0) {
    const Matrix sobol = optim::sobol_sample(static_cast<int>(num_constraints), kConstraintDraws, 0, false);
    // Shift each point to the centre of its 2^-32 cell so that u = 0 cannot occur.
    grid.constraint_draws = (sobol.array() + 0.5 / 4294967296.0).matrix();
  }
  const Eigen::Index draws = num_constraints > 0 ? kConstraintDraws : 1;
  for (double z0 : scores) {
    for (Eigen::Index s = 0; s < draws; ++s) {
      FantasyDescriptor f{Vector::Constant(n_tasks, nan), Vector::Constant(n_tasks, nan)};
      f.z[0] = z0;
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(num_constraints); ++k) {
        f.z[k + 1] = normal_quantile(grid.constraint_draws(s, k));
      }
      grid.combined.push_back(std::move(f));
    }
  }
  return grid;
}

FantasyGrid make_fantasy_grid(const ModelBundle& bundle, const Vector& x, FantasyMode mode, std::size_t source) {
  FantasyGrid grid = fantasy_template(bundle.num_constraints(), mode, source);
  std::vector<gp::Prediction> moments;
  for (std::size_t j = 0; j < bundle.num_tasks(); ++j) moments.push_back(bundle.task(j).posterior(x));
  for (auto& f : grid.combined) {
    for (std::size_t j = 0; j < bundle.num_tasks(); ++j) {
      if (!f.conditions(j)) continue;
      const auto& m = moments[j];
      f.values[static_cast<Eigen::Index>(j)] = m.mean + std::sqrt(m.variance) * f.z[static_cast<Eigen::Index>(j)];
    }
  }
  return grid;
}

}  // namespace cbo::acq
