#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/acquisition/ucbd.hpp"
#include "cbo/engine/engine.hpp"
#include "cbo/optim/sampling.hpp"

namespace cbo::engine {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t step_seed(const EngineConfig& cfg, int iteration, std::uint64_t salt) {
  return mix_seed(mix_seed(cfg.seed, static_cast<std::uint64_t>(iteration) + 1), salt);
}

std::vector<std::size_t> all_tasks(std::size_t n) {
  std::vector<std::size_t> tasks(n);
  for (std::size_t k = 0; k < n; ++k) tasks[k] = k;
  return tasks;
}

acq::InnerConfig inner_config(const RunState& state, const EngineConfig& cfg, double offset) {
  acq::InnerConfig inner;
  inner.search = cfg.inner_cfg;
  inner.utility_offset = offset;
  inner.seed = step_seed(cfg, state.iteration, 0x1a);
  return inner;
}

optim::MultistartConfig acquisition_search(const EngineConfig& cfg, const Vector& x_r) {
  optim::MultistartConfig mc = cfg.acquisition_cfg;
  mc.seed_points.push_back(x_r);
  return mc;
}

// Objective plus every constraint whose feasibility is not already settled at x.
std::vector<std::size_t> coupled_tasks(const acq::ModelBundle& bundle, const Vector& x, double delta) {
  std::vector<std::size_t> tasks{0};
  for (std::size_t k = 1; k < bundle.num_tasks(); ++k) {
    if (acq::prob_feasible_k(bundle.task(k), x) < 1.0 - delta) tasks.push_back(k);
  }
  return tasks;
}

struct SourceChoice {
  std::size_t task = 0;
  Vector x;
  double value = -std::numeric_limits<double>::infinity();
  bool any = false;
};

// Coupled wins only on a strict improvement over the best single source.
void settle(RunState& state, const EngineConfig& cfg, StepOutcome& out, const SourceChoice& source,
            const Vector& coupled_x, bool coupled_available) {
  const bool coupled_wins = coupled_available && (!source.any || out.coupled_value > source.value);
  if (coupled_wins) {
    out.coupled_branch = true;
    out.location = coupled_x;
    out.tasks = coupled_tasks(state.bundle, coupled_x, cfg.delta_threshold);
  } else if (source.any) {
    out.location = source.x;
    out.tasks = {source.task};
  } else {
    return;
  }
  out.taken = true;
  state.evaluate(out.tasks, out.location, state.iteration);
}

}  // namespace

void TaskDataset::append(const Vector& x, double value) {
  if (X.rows() == 0) X.resize(0, x.size());
  X.conservativeResize(X.rows() + 1, Eigen::NoChange);
  X.row(X.rows() - 1) = x.transpose();
  y.conservativeResize(y.size() + 1);
  y[y.size() - 1] = value;
}

const acq::ModelBundle& RunState::models(const EngineConfig& cfg) {
  const std::size_t n = data.size();
  if (fitted_sizes.size() != n) {
    fitted_sizes.assign(n, -1);
    bundle.constraints.resize(n - 1);
  }
  gp::FitOptions opts = cfg.fit;
  opts.input_width = problem->box.width();
  for (std::size_t j = 0; j < n; ++j) {
    if (fitted_sizes[j] == data[j].X.rows()) continue;
    opts.seed = mix_seed(cfg.fit.seed, j);
    gp::GpModel model = gp::fit(data[j].X, data[j].y, opts);
    if (j == 0) {
      bundle.objective = std::move(model);
    } else {
      bundle.constraints[j - 1] = std::move(model);
    }
    fitted_sizes[j] = data[j].X.rows();
  }
  return bundle;
}

const StepContext& RunState::current_context(const EngineConfig& cfg) {
  if (context) return *context;
  const auto& b = models(cfg);
  StepContext ctx;
  if (cfg.penalty == PenaltyPolicy::MinPosterior) {
    const Matrix grid = problem->box.from_unit_rows(
        optim::sobol_sample(static_cast<int>(problem->dim()), cfg.penalty_grid, mix_seed(cfg.seed, 0x9e)));
    double lowest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
      lowest = std::min(lowest, b.objective.posterior_mean(grid.row(i).transpose()));
    }
    ctx.offset = lowest;
  }
  ctx.recommendation = recommend(b, problem->box, cfg, ctx.offset, step_seed(cfg, iteration, 0x2b));
  ctx.recommendation.feasible_truth = problem->feasible(ctx.recommendation.x);
  context = std::move(ctx);
  return *context;
}

void RunState::evaluate(const std::vector<std::size_t>& tasks, const Vector& x, int at_iteration) {
  LedgerEntry entry;
  entry.iteration = at_iteration;
  entry.tasks = tasks;
  entry.location = x;
  for (auto t : tasks) {
    const double value = problem->evaluate_task(t, x);
    data.at(t).append(x, value);
    entry.values.push_back(value);
  }
  ledger.record(std::move(entry));
  context.reset();
}

RunState initialize(const problems::ProblemDefinition& problem, const CostVector& costs, double budget,
                    const EngineConfig& cfg) {
  cfg.validate();
  if (costs.size() != problem.num_tasks()) throw std::invalid_argument("initialize: need one cost per task");
  RunState state;
  state.problem = &problem;
  state.data.resize(problem.num_tasks());
  state.ledger = EvaluationLedger(costs, budget, cfg.budget_includes_initial);
  const double design_cost = costs.total() * cfg.initial_design_size;
  if (cfg.budget_includes_initial && design_cost > budget + 1e-9 * (1.0 + budget)) {
    throw std::invalid_argument("initialize: budget does not cover the initial design");
  }
  const Matrix design = optim::lhs_sample(problem.box, cfg.initial_design_size, mix_seed(cfg.seed, 0x1d));
  const auto tasks = all_tasks(problem.num_tasks());
  for (Eigen::Index i = 0; i < design.rows(); ++i) state.evaluate(tasks, design.row(i).transpose(), 0);
  return state;
}

StepOutcome step_dckg(RunState& state, const EngineConfig& cfg) {
  StepOutcome out;
  const auto& ctx = state.current_context(cfg);
  const auto& bundle = state.bundle;
  const auto& costs = state.ledger.costs();
  const auto& box = state.problem->box;
  const Vector x_r = ctx.recommendation.x;
  const acq::LookaheadEvaluator eval(bundle, box, x_r, inner_config(state, cfg, ctx.offset));
  const auto search = acquisition_search(cfg, x_r);

  SourceChoice best;
  out.source_values.assign(bundle.num_tasks(), kNaN);
  for (std::size_t k = 0; k < bundle.num_tasks(); ++k) {
    if (!state.ledger.fits(costs[k])) continue;
    optim::Objective f;
    f.value = [&, k](const Vector& x) { return eval.dckg(x, k, costs[k]); };
    const auto res = optim::maximize(f, box, search, step_seed(cfg, state.iteration, 0x100 + k));
    ++out.maximizations;
    out.source_values[k] = res.value;
    if (!best.any || res.value > best.value) best = {k, res.x, res.value, true};
  }

  Vector coupled_x;
  const bool coupled_available = cfg.include_coupled_ckg && state.ledger.fits(costs.total());
  out.coupled_value = kNaN;
  if (coupled_available) {
    optim::Objective f;
    const double total = costs.total();
    f.value = [&](const Vector& x) { return eval.ckg(x) / total; };
    const auto res = optim::maximize(f, box, search, step_seed(cfg, state.iteration, 0x200));
    ++out.maximizations;
    out.coupled_value = res.value;
    coupled_x = res.x;
  }
  settle(state, cfg, out, best, coupled_x, coupled_available);
  return out;
}

StepOutcome step_cei_plus(RunState& state, const EngineConfig& cfg) {
  StepOutcome out;
  const double f_best = incumbent_feasible_value(state, cfg);
  const auto& ctx = state.current_context(cfg);
  const auto& bundle = state.bundle;
  const auto& costs = state.ledger.costs();
  const auto& box = state.problem->box;

  optim::Objective ei;
  ei.value = [&](const Vector& x) { return acq::constrained_ei(bundle, f_best, x); };
  const Vector x_star =
      optim::maximize(ei, box, acquisition_search(cfg, ctx.recommendation.x), step_seed(cfg, state.iteration, 0x300)).x;
  ++out.maximizations;

  const acq::LookaheadEvaluator eval(bundle, box, ctx.recommendation.x, inner_config(state, cfg, ctx.offset));
  SourceChoice best;
  out.source_values.assign(bundle.num_tasks(), kNaN);
  for (std::size_t k = 0; k < bundle.num_tasks(); ++k) {
    if (!state.ledger.fits(costs[k])) continue;
    const double v = eval.dckg(x_star, k, costs[k]);
    ++out.point_evaluations;
    out.source_values[k] = v;
    if (!best.any || v > best.value) best = {k, x_star, v, true};
  }
  const bool coupled_available = cfg.include_coupled_ckg && state.ledger.fits(costs.total());
  out.coupled_value = kNaN;
  if (coupled_available) {
    out.coupled_value = eval.ckg(x_star) / costs.total();
    ++out.point_evaluations;
  }
  settle(state, cfg, out, best, x_star, coupled_available);
  return out;
}

StepOutcome step_coupled(RunState& state, Policy policy, const EngineConfig& cfg) {
  if (policy != Policy::cEI && policy != Policy::cKG) {
    throw std::invalid_argument("step_coupled: policy must be cei or ckg");
  }
  StepOutcome out;
  const auto& costs = state.ledger.costs();
  if (!state.ledger.fits(costs.total())) return out;
  const double f_best = policy == Policy::cEI ? incumbent_feasible_value(state, cfg) : 0.0;
  const auto& ctx = state.current_context(cfg);
  const auto& bundle = state.bundle;
  const auto& box = state.problem->box;
  const auto search = acquisition_search(cfg, ctx.recommendation.x);
  const auto seed = step_seed(cfg, state.iteration, 0x400);

  optim::MaximizeResult res;
  if (policy == Policy::cEI) {
    optim::Objective ei;
    ei.value = [&](const Vector& x) { return acq::constrained_ei(bundle, f_best, x); };
    res = optim::maximize(ei, box, search, seed);
  } else {
    const acq::LookaheadEvaluator eval(bundle, box, ctx.recommendation.x, inner_config(state, cfg, ctx.offset));
    optim::Objective f;
    f.value = [&](const Vector& x) { return eval.ckg(x); };
    res = optim::maximize(f, box, search, seed);
  }
  out.maximizations = 1;
  out.coupled_branch = true;
  out.coupled_value = res.value;
  out.location = res.x;
  out.tasks = all_tasks(bundle.num_tasks());
  out.taken = true;
  state.evaluate(out.tasks, out.location, state.iteration);
  return out;
}

StepOutcome step_ucbd(RunState& state, const EngineConfig& cfg) {
  StepOutcome out;
  const auto& bundle = state.models(cfg);
  acq::UcbdConfig ucfg;
  ucfg.delta_conf = cfg.ucbd_delta;
  ucfg.domain_size = cfg.ucbd_domain_size;
  ucfg.penalty_rho = acq::default_penalty_rho(state.data[0].y);
  ucfg.costs = state.ledger.costs().values();
  ucfg.grid_seed = mix_seed(cfg.seed, 0x0cb);
  const auto decision = acq::ucbd_step(bundle, std::max(1, state.iteration), ucfg, state.problem->box);
  ++out.maximizations;
  if (!state.ledger.fits(state.ledger.costs()[decision.task])) return out;
  out.tasks = {decision.task};
  out.location = decision.x_star;
  out.taken = true;
  state.evaluate(out.tasks, out.location, state.iteration);
  return out;
}

double incumbent_feasible_value(RunState& state, const EngineConfig& cfg) {
  const auto& obj = state.data[0];
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < obj.X.rows(); ++i) {
    bool feasible = true;
    for (std::size_t k = 1; k < state.data.size() && feasible; ++k) {
      const auto& c = state.data[k];
      bool seen = false;
      for (Eigen::Index r = 0; r < c.X.rows(); ++r) {
        if (c.X.row(r) == obj.X.row(i)) {
          seen = true;
          if (c.y[r] > 0.0) feasible = false;
          break;
        }
      }
      if (!seen) feasible = false;
    }
    if (feasible) best = std::max(best, obj.y[i]);
  }
  if (std::isfinite(best)) return best;

  const auto& ctx = state.current_context(cfg);
  const auto& bundle = state.bundle;
  double fallback = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < obj.X.rows(); ++i) {
    const Vector x = obj.X.row(i).transpose();
    fallback = std::max(fallback, (bundle.objective.posterior_mean(x) - ctx.offset) * acq::prob_feasible(bundle, x));
  }
  return ctx.offset + fallback;
}

}  // namespace cbo::engine
