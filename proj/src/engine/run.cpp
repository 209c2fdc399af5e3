#include <stdexcept>

#include "cbo/engine/engine.hpp"

namespace cbo::engine {

namespace {

StepOutcome take_step(RunState& state, Policy policy, const EngineConfig& cfg) {
  switch (policy) {
    case Policy::dcKG:
    case Policy::dcKG_noCoupled: return step_dckg(state, cfg);
    case Policy::cEIplus: return step_cei_plus(state, cfg);
    case Policy::cEI:
    case Policy::cKG: return step_coupled(state, policy, cfg);
    case Policy::UCBD: return step_ucbd(state, cfg);
  }
  throw std::invalid_argument("run: unknown policy");
}

}  // namespace

RunRecord run(const problems::ProblemDefinition& problem, Policy policy, double budget, std::uint64_t seed,
              EngineConfig cfg, std::optional<CostVector> costs) {
  cfg.seed = seed;
  if (policy == Policy::dcKG_noCoupled) cfg.include_coupled_ckg = false;
  const CostVector b = costs ? *costs : problem.costs;
  RunState state = initialize(problem, b, budget, cfg);

  RunRecord record;
  record.seed = seed;
  auto snapshot = [&](StepRow row) {
    const auto& ctx = state.current_context(cfg);
    const double M = cfg.penalty == PenaltyPolicy::MinPosterior ? ctx.offset : problem.penalty_M;
    row.oc = opportunity_cost(problem, ctx.recommendation.x, M);
    row.recommended = ctx.recommendation.x;
    return row;
  };

  double running = 0.0;
  for (const auto& entry : state.ledger.entries()) {
    StepRow row;
    row.step = 0;
    row.tasks = entry.tasks;
    row.location = entry.location;
    running += state.ledger.cost_of(entry.tasks);
    row.spent = cfg.budget_includes_initial ? running : 0.0;
    record.rows.push_back(snapshot(std::move(row)));
  }

  while (true) {
    state.iteration += 1;
    const StepOutcome out = take_step(state, policy, cfg);
    if (!out.taken) break;
    StepRow row;
    row.step = state.iteration;
    row.tasks = out.tasks;
    row.location = out.location;
    row.spent = state.ledger.budget_spent();
    record.rows.push_back(snapshot(std::move(row)));
  }
  record.ledger = state.ledger;
  return record;
}

}  // namespace cbo::engine
