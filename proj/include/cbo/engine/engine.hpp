#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbo/acquisition/bundle.hpp"
#include "cbo/acquisition/lookahead.hpp"
#include "cbo/common.hpp"
#include "cbo/engine/costs.hpp"
#include "cbo/engine/ledger.hpp"
#include "cbo/gp/fit.hpp"
#include "cbo/optim/maximize.hpp"
#include "cbo/problems/problem.hpp"

namespace cbo::engine {

enum class Policy { dcKG, dcKG_noCoupled, cEIplus, cEI, cKG, UCBD };

/// CLI names: dckg, dckg-nocoupled, cei-plus, cei, ckg, ucbd.
std::string policy_name(Policy policy);
Policy parse_policy(std::string_view name);

/// How the infeasibility value M is chosen. MinPosterior uses the minimum objective
/// posterior mean over a Sobol grid of the box, recomputed whenever the models change.
enum class PenaltyPolicy { Zero, MinPosterior };

struct EngineConfig {
  double delta_threshold = 1e-7;
  bool include_coupled_ckg = true;
  int initial_design_size = 6;
  std::uint64_t seed = 0;
  optim::MultistartConfig acquisition_cfg{15, 72, optim::LocalMethod::QuasiNewtonBounded, 100, {}};
  optim::MultistartConfig posterior_mean_cfg{20, 2048, optim::LocalMethod::QuasiNewtonBounded, 100, {}};
  optim::MultistartConfig inner_cfg{15, 100, optim::LocalMethod::AdamProjected, 100, {}};
  gp::FitOptions fit;
  PenaltyPolicy penalty = PenaltyPolicy::MinPosterior;
  int penalty_grid = 1024;
  /// When false the budget counts only spend after the initial design.
  bool budget_includes_initial = false;
  int ucbd_domain_size = 4096;
  double ucbd_delta = 0.1;

  /// Default restart and sample counts.
  static EngineConfig full();
  /// Reduced counts that keep a single-core replication in the tens of seconds.
  static EngineConfig desk();
  void validate() const;
};

struct Recommendation {
  Vector x;
  double score = 0.0;  ///< (mu - M) * PF at x
  std::optional<bool> feasible_truth;
};

/// argmax over the box of (mu(x) - M) PF(x), which is mu * PF for M = 0.
Recommendation recommend(const acq::ModelBundle& bundle, const optim::Box& box, const EngineConfig& cfg,
                         double offset, std::uint64_t seed);

/// f(x*) - f(x_r) when x_r satisfies the true constraints, f(x*) - M otherwise.
double opportunity_cost(const problems::ProblemDefinition& problem, const Vector& x_r, double penalty_M);

struct TaskDataset {
  Matrix X;
  Vector y;
  void append(const Vector& x, double value);
};

/// Recommendation and penalty for the current models.
struct StepContext {
  double offset = 0.0;
  Recommendation recommendation;
};

/// Mutable state of one optimization run.
struct RunState {
  const problems::ProblemDefinition* problem = nullptr;
  std::vector<TaskDataset> data;
  EvaluationLedger ledger;
  int iteration = 0;
  acq::ModelBundle bundle;
  std::vector<Eigen::Index> fitted_sizes;
  std::optional<StepContext> context;

  /// Refits any task whose dataset grew since its last fit (a fit is a pure function of
  /// the data, so unchanged tasks keep an identical model).
  const acq::ModelBundle& models(const EngineConfig& cfg);
  /// Offset and recommendation for the current models (cached until new data arrives).
  const StepContext& current_context(const EngineConfig& cfg);
  /// Evaluates `tasks` at x on the true problem, records them and invalidates caches.
  void evaluate(const std::vector<std::size_t>& tasks, const Vector& x, int iteration);
};

/// Latin hypercube initial design with every task evaluated at each point.
RunState initialize(const problems::ProblemDefinition& problem, const CostVector& costs, double budget,
                    const EngineConfig& cfg);

struct StepOutcome {
  bool taken = false;
  std::vector<std::size_t> tasks;
  Vector location;
  bool coupled_branch = false;
  std::vector<double> source_values;  ///< best value per source (cost-scaled), NaN if not eligible
  double coupled_value = 0.0;         ///< cost-scaled coupled value (NaN when unavailable)
  int maximizations = 0;              ///< acquisition maximizations performed
  int point_evaluations = 0;          ///< stand-alone KG-type point evaluations
};

StepOutcome step_dckg(RunState& state, const EngineConfig& cfg);
StepOutcome step_cei_plus(RunState& state, const EngineConfig& cfg);
/// policy must be Policy::cEI or Policy::cKG.
StepOutcome step_coupled(RunState& state, Policy policy, const EngineConfig& cfg);
StepOutcome step_ucbd(RunState& state, const EngineConfig& cfg);

/// Best observed objective among locations where every constraint was observed feasible;
/// falls back to M + max_i (mu(x_i) - M) PF(x_i) over objective observations.
double incumbent_feasible_value(RunState& state, const EngineConfig& cfg);

struct StepRow {
  int step = 0;  ///< 0 for initial-design rows
  std::vector<std::size_t> tasks;
  Vector location;
  double spent = 0.0;  ///< budget-counted spend after this row
  double oc = 0.0;
  Vector recommended;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<StepRow> rows;
  EvaluationLedger ledger;
};

/// Initial design followed by steps of `policy` until the next step no longer fits the
/// budget. Deterministic under `seed`.
RunRecord run(const problems::ProblemDefinition& problem, Policy policy, double budget, std::uint64_t seed,
              EngineConfig cfg, std::optional<CostVector> costs = std::nullopt);

}  // namespace cbo::engine
