#include "cbo/acquisition/ucbd.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cbo/optim/sampling.hpp"

namespace cbo::acq {

void UcbdConfig::validate(std::size_t num_constraints) const {
  if (!(delta_conf > 0.0 && delta_conf < 1.0)) throw std::invalid_argument("UcbdConfig: delta must lie in (0,1)");
  if (domain_size < 1) throw std::invalid_argument("UcbdConfig: domain_size must be positive");
  if (costs.size() != static_cast<Eigen::Index>(num_constraints + 1) || (costs.array() <= 0.0).any()) {
    throw std::invalid_argument("UcbdConfig: need K+1 positive costs");
  }
}

double default_penalty_rho(const Vector& objective_observations) {
  const double scale = objective_observations.size() ? objective_observations.cwiseAbs().maxCoeff() : 0.0;
  return -1e6 * (1.0 + scale);
}

double ucbd_beta(std::size_t num_constraints, int domain_size, int t, double delta_conf) {
  const double tt = static_cast<double>(t);
  return 2.0 * std::log((static_cast<double>(num_constraints) + 1.0) * domain_size * tt * tt *
                        std::numbers::pi * std::numbers::pi / (6.0 * delta_conf));
}

UcbdDecision ucbd_step(const ModelBundle& bundle, int t, const UcbdConfig& cfg, const optim::Box& box) {
  if (t < 1) throw std::invalid_argument("ucbd_step: t must be >= 1");
  const std::size_t K = bundle.num_constraints();
  cfg.validate(K);
  const double beta = ucbd_beta(K, cfg.domain_size, t, cfg.delta_conf);
  const Matrix grid = box.from_unit_rows(
      optim::sobol_sample(static_cast<int>(box.dim()), cfg.domain_size, cfg.grid_seed, cfg.grid_seed != 0));

  const auto n = grid.rows();
  Vector alpha(n);
  Vector worst_lower(n);
  parallel_for(static_cast<long>(n), Execution::Parallel, [&](long i) {
    const Vector x = grid.row(i).transpose();
    bool optimistic = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      const auto p = bundle.constraints[k].posterior(x);
      const double lower = p.mean - std::sqrt(beta * p.variance);
      worst = std::max(worst, lower);
      if (lower > 0.0) optimistic = false;
    }
    worst_lower[i] = worst;
    if (optimistic) {
      const auto p = bundle.objective.posterior(x);
      alpha[i] = p.mean + std::sqrt(beta * p.variance);
    } else {
      alpha[i] = cfg.penalty_rho;
    }
  });

  UcbdDecision out;
  Eigen::Index best = 0;
  out.optimistic_set_empty = K > 0 && (worst_lower.array() > 0.0).all();
  if (out.optimistic_set_empty) {
    worst_lower.minCoeff(&best);
  } else {
    alpha.maxCoeff(&best);
  }
  out.x_star = grid.row(best).transpose();

  auto worst_scaled_constraint = [&](std::size_t& arg) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      const auto p = bundle.constraints[k].posterior(out.x_star);
      const double upper = p.mean + std::sqrt(beta * p.variance);
      const double scaled = upper / cfg.costs[static_cast<Eigen::Index>(k + 1)];
      if (scaled > top) {
        top = scaled;
        arg = k + 1;
      }
    }
  };

  if (out.optimistic_set_empty) {
    worst_scaled_constraint(out.task);
    return out;
  }
  const auto obj = bundle.objective.posterior(out.x_star);
  const double vertical = 2.0 * std::sqrt(beta * obj.variance);
  const double threshold = vertical / cfg.costs[0];
  bool uncharted = false;
  for (std::size_t k = 0; k < K; ++k) {
    const auto p = bundle.constraints[k].posterior(out.x_star);
    if (p.mean + std::sqrt(beta * p.variance) > threshold) uncharted = true;
  }
  out.task = 0;
  if (uncharted) worst_scaled_constraint(out.task);
  return out;
}

}  // namespace cbo::acq
