#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cbo/engine/engine.hpp"
#include "cbo/harness/aggregate.hpp"

namespace cbo::harness {

struct ExperimentSpec {
  std::string problem = "mystery";
  std::vector<engine::Policy> policies{engine::Policy::dcKG};
  std::optional<engine::CostVector> costs;  ///< defaults to the problem's equal costs
  double budget = 30.0;
  int replications = 1;
  int initial_design_size = 6;
  std::uint64_t base_seed = 0;
  engine::PenaltyPolicy penalty = engine::PenaltyPolicy::MinPosterior;
  bool include_coupled_ckg = true;
  std::filesystem::path output;  ///< empty: nothing is written

  void validate() const;
};

struct ReplicationFailure {
  std::uint64_t seed = 0;
  std::string message;
};

struct PolicyResult {
  engine::Policy policy = engine::Policy::dcKG;
  std::vector<engine::RunRecord> records;  ///< completed runs, sorted by seed
  std::vector<ReplicationFailure> failures;
  std::optional<AggregateCurve> curve;
};

/// Runs replication i with seed base_seed + i for every policy, replications in parallel.
/// Per policy it writes <policy>.csv (one row per replication and step) and
/// <policy>_aggregate.csv into spec.output when that is set.
std::vector<PolicyResult> run_experiment(const ExperimentSpec& spec, engine::EngineConfig cfg);

/// Equal costs, the objective five times dearer, then each constraint five times dearer.
std::vector<engine::CostVector> cost_scenarios(const problems::ProblemDefinition& problem);

}  // namespace cbo::harness
