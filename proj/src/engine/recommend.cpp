#include <limits>
#include <stdexcept>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/engine/engine.hpp"

namespace cbo::engine {

std::string policy_name(Policy policy) {
  switch (policy) {
    case Policy::dcKG: return "dckg";
    case Policy::dcKG_noCoupled: return "dckg-nocoupled";
    case Policy::cEIplus: return "cei-plus";
    case Policy::cEI: return "cei";
    case Policy::cKG: return "ckg";
    case Policy::UCBD: return "ucbd";
  }
  return "unknown";
}

Policy parse_policy(std::string_view name) {
  for (Policy p : {Policy::dcKG, Policy::dcKG_noCoupled, Policy::cEIplus, Policy::cEI, Policy::cKG, Policy::UCBD}) {
    if (policy_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown policy: " + std::string(name));
}

EngineConfig EngineConfig::full() { return EngineConfig{}; }

EngineConfig EngineConfig::desk() {
  EngineConfig cfg;
  cfg.acquisition_cfg = {3, 72, optim::LocalMethod::QuasiNewtonBounded, 30, {}};
  cfg.posterior_mean_cfg = {4, 512, optim::LocalMethod::QuasiNewtonBounded, 50, {}};
  cfg.inner_cfg = {1, 100, optim::LocalMethod::AdamProjected, 0, {}};
  cfg.fit.num_starts = 5;
  cfg.fit.max_iters = 60;
  return cfg;
}

void EngineConfig::validate() const {
  if (!(delta_threshold > 0.0 && delta_threshold < 1.0)) {
    throw std::invalid_argument("EngineConfig: delta_threshold must lie in (0,1)");
  }
  if (initial_design_size < 2) throw std::invalid_argument("EngineConfig: initial design needs >= 2 points");
  acquisition_cfg.validate();
  posterior_mean_cfg.validate();
  if (inner_cfg.raw_samples < 1) throw std::invalid_argument("EngineConfig: inner raw_samples must be positive");
  if (penalty_grid < 1 || ucbd_domain_size < 1) throw std::invalid_argument("EngineConfig: grid sizes must be positive");
}

Recommendation recommend(const acq::ModelBundle& bundle, const optim::Box& box, const EngineConfig& cfg,
                         double offset, std::uint64_t seed) {
  optim::Objective utility;
  utility.value = [&](const Vector& x) {
    return (bundle.objective.posterior_mean(x) - offset) * acq::prob_feasible(bundle, x);
  };
  optim::MultistartConfig mc = cfg.posterior_mean_cfg;
  const Matrix& X = bundle.objective.train_x();
  for (Eigen::Index i = 0; i < X.rows(); ++i) mc.seed_points.emplace_back(X.row(i).transpose());
  const auto best = optim::maximize(utility, box, mc, seed);
  return {best.x, best.value, std::nullopt};
}

double opportunity_cost(const problems::ProblemDefinition& problem, const Vector& x_r, double penalty_M) {
  if (problem.feasible(x_r)) return problem.true_opt_value - problem.objective(x_r);
  return problem.true_opt_value - penalty_M;
}

}  // namespace cbo::engine
