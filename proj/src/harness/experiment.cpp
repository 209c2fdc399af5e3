#include "cbo/harness/experiment.hpp"

#include <iostream>
#include <stdexcept>

#include "cbo/harness/results_csv.hpp"
#include "cbo/problems/problem.hpp"

namespace cbo::harness {

void ExperimentSpec::validate() const {
  if (replications < 1) throw std::invalid_argument("ExperimentSpec: replications must be >= 1");
  if (!(budget > 0.0)) throw std::invalid_argument("ExperimentSpec: budget must be positive");
  if (policies.empty()) throw std::invalid_argument("ExperimentSpec: no policies");
}

std::vector<engine::CostVector> cost_scenarios(const problems::ProblemDefinition& problem) {
  const auto n = static_cast<Eigen::Index>(problem.num_tasks());
  std::vector<engine::CostVector> out{engine::CostVector::uniform(problem.num_tasks())};
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector b = Vector::Ones(n);
    b[k] = 5.0;
    out.emplace_back(b);
  }
  return out;
}

std::vector<PolicyResult> run_experiment(const ExperimentSpec& spec, engine::EngineConfig cfg) {
  spec.validate();
  const auto problem = problems::make_problem(spec.problem);
  const engine::CostVector costs = spec.costs ? *spec.costs : problem.costs;
  if (costs.size() != problem.num_tasks()) {
    throw std::invalid_argument("run_experiment: " + spec.problem + " needs " +
                                std::to_string(problem.num_tasks()) + " costs");
  }
  cfg.initial_design_size = spec.initial_design_size;
  cfg.penalty = spec.penalty;
  cfg.include_coupled_ckg = spec.include_coupled_ckg;
  cfg.validate();
  if (!spec.output.empty()) std::filesystem::create_directories(spec.output);

  std::vector<PolicyResult> results;
  for (const auto policy : spec.policies) {
    const auto reps = static_cast<std::size_t>(spec.replications);
    std::vector<std::optional<engine::RunRecord>> slots(reps);
    std::vector<std::string> errors(reps);
    parallel_for(static_cast<long>(reps), Execution::Parallel, [&](long i) {
      const auto seed = spec.base_seed + static_cast<std::uint64_t>(i);
      try {
        slots[static_cast<std::size_t>(i)] = engine::run(problem, policy, spec.budget, seed, cfg, costs);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    });

    PolicyResult res;
    res.policy = policy;
    for (std::size_t i = 0; i < reps; ++i) {
      if (slots[i]) {
        res.records.push_back(std::move(*slots[i]));
      } else {
        res.failures.push_back({spec.base_seed + i, errors[i]});
      }
    }
    const auto name = engine::policy_name(policy);
    for (const auto& f : res.failures) {
      std::cerr << "warning: " << name << " seed " << f.seed << " failed: " << f.message << '\n';
    }
    if (2 * res.records.size() < reps) {
      std::cerr << "warning: only " << res.records.size() << " of " << reps << " " << name
                << " replications completed\n";
    }
    if (!res.records.empty()) {
      res.curve = aggregate(res.records, problem.num_tasks(), spec.budget, costs.min(), name);
    }
    if (!spec.output.empty()) {
      write_results(spec.output / (name + ".csv"), res.records, problem.dim());
      if (res.curve) write_aggregate(spec.output / (name + "_aggregate.csv"), *res.curve);
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace cbo::harness
