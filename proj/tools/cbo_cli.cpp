#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "cbo/harness/experiment.hpp"
#include "cbo/harness/plots.hpp"
#include "cbo/harness/results_csv.hpp"
#include "cbo/problems/certify.hpp"
#include "cbo/problems/problem.hpp"

namespace {

void apply_worker_count() {
  if (const char* env = std::getenv("CBO_WORKERS")) {
    const int n = std::atoi(env);
    if (n < 1) throw std::invalid_argument("CBO_WORKERS must be a positive integer");
    omp_set_num_threads(n);
  }
}

std::string vector_text(const cbo::Vector& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + cbo::harness::format_double(v[i]);
  return out + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained Bayesian optimization with decoupled knowledge gradient"};
  app.set_config("--config", "", "key = value configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run replications of one or more policies");
  std::string problem = "mystery";
  std::vector<std::string> policies{"dckg"};
  double budget = 30.0;
  int reps = 1;
  std::uint64_t seed = 0;
  std::string costs;
  std::string out = "results";
  bool no_coupled = false;
  std::string penalty = "min-posterior";
  std::string preset = "full";
  int init = 6;
  bool include_initial = false;
  run->add_option("--problem", problem, "benchmark name")->check(CLI::IsMember(cbo::problems::problem_names()));
  run->add_option("--policy", policies, "dckg, dckg-nocoupled, cei-plus, cei, ckg or ucbd (repeatable)")
      ->delimiter(',');
  run->add_option("--budget", budget, "budget in cost units")->check(CLI::PositiveNumber);
  run->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "base seed; replication i uses seed + i");
  run->add_option("--costs", costs, "comma-separated task costs, objective first");
  run->add_option("--out", out, "output directory");
  run->add_flag("--no-coupled-ckg", no_coupled, "drop the coupled cKG candidate from dcKG");
  run->add_option("--penalty", penalty, "infeasibility value M")->check(CLI::IsMember({"zero", "min-posterior"}));
  run->add_option("--preset", preset, "optimizer effort")->check(CLI::IsMember({"full", "desk"}));
  run->add_option("--init", init, "initial design size")->check(CLI::PositiveNumber);
  run->add_flag("--budget-includes-initial", include_initial, "charge the initial design to the budget");

  auto* certify = app.add_subcommand("certify", "certify the true optimum of a benchmark");
  std::string cert_problem;
  int resolution = 1000;
  certify->add_option("--problem", cert_problem, "benchmark name")
      ->required()
      ->check(CLI::IsMember(cbo::problems::problem_names()));
  certify->add_option("--resolution", resolution, "grid points per axis")->check(CLI::PositiveNumber);

  auto* plot = app.add_subcommand("plot", "render SVG charts from a results directory");
  std::string plot_in;
  plot->add_option("--in", plot_in, "directory written by run")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_worker_count();
    if (*run) {
      cbo::harness::ExperimentSpec spec;
      spec.problem = problem;
      spec.policies.clear();
      for (const auto& p : policies) spec.policies.push_back(cbo::engine::parse_policy(p));
      if (!costs.empty()) spec.costs = cbo::engine::CostVector::parse(costs);
      spec.budget = budget;
      spec.replications = reps;
      spec.base_seed = seed;
      spec.initial_design_size = init;
      spec.include_coupled_ckg = !no_coupled;
      spec.penalty = penalty == "zero" ? cbo::engine::PenaltyPolicy::Zero : cbo::engine::PenaltyPolicy::MinPosterior;
      spec.output = out;
      auto cfg = preset == "desk" ? cbo::engine::EngineConfig::desk() : cbo::engine::EngineConfig::full();
      cfg.budget_includes_initial = include_initial;
      const auto results = cbo::harness::run_experiment(spec, cfg);
      for (const auto& r : results) {
        std::cout << cbo::engine::policy_name(r.policy) << ": " << r.records.size() << " runs";
        if (r.curve) std::cout << ", final median OC " << cbo::harness::format_double(r.curve->median.back());
        std::cout << '\n';
      }
    } else if (*certify) {
      const auto p = cbo::problems::make_problem(cert_problem);
      const auto c = cbo::problems::certify_optimum(p, resolution);
      std::cout << "problem " << p.name << '\n'
                << "grid " << c.grid_resolution << " per axis, best grid value "
                << cbo::harness::format_double(c.best_grid_value) << " at " << vector_text(c.best_grid_point) << '\n'
                << "certified value " << cbo::harness::format_double(c.value) << " at " << vector_text(c.location)
                << '\n';
      for (std::size_t k = 1; k <= p.num_constraints(); ++k) {
        std::cout << "c" << k << " = " << cbo::harness::format_double(p.constraint(k, c.location)) << '\n';
      }
    } else if (*plot) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(plot_in)) {
        const auto name = entry.path().filename().string();
        if (name.ends_with("_aggregate.csv")) files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<cbo::harness::AggregateCurve> curves;
      for (const auto& f : files) curves.push_back(cbo::harness::read_aggregate(f));
      for (const auto& f : cbo::harness::emit_plots(curves, plot_in, std::filesystem::path(plot_in).filename().string())) {
        std::cout << f.string() << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
