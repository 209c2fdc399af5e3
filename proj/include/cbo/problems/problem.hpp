#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cbo/common.hpp"
#include "cbo/engine/costs.hpp"
#include "cbo/optim/box.hpp"

namespace cbo::problems {

/// Maximize: the written objective is maximized. MinimizeWritten: the written objective
/// is minimized, i.e. the engine maximizes its negation.
enum class Sense { Maximize, MinimizeWritten };

using ScalarFunction = std::function<double(const Vector&)>;

/// Benchmark problem. Constraints are feasible when c_k(x) <= 0. `true_opt_value` is in
/// the engine's maximization convention.
struct ProblemDefinition {
  std::string name;
  optim::Box box;
  ScalarFunction objective_written;
  std::vector<ScalarFunction> constraints;
  engine::CostVector costs;
  Sense sense = Sense::Maximize;
  double true_opt_value = 0.0;
  Vector true_opt_location;
  double penalty_M = 0.0;

  Eigen::Index dim() const { return box.dim(); }
  std::size_t num_constraints() const { return constraints.size(); }
  std::size_t num_tasks() const { return constraints.size() + 1; }
  /// Objective in the maximization convention.
  double objective(const Vector& x) const;
  /// Constraint k in 1..K.
  double constraint(std::size_t k, const Vector& x) const;
  /// Task 0 is the objective (maximization convention), tasks 1..K the constraints.
  double evaluate_task(std::size_t task, const Vector& x) const;
  bool feasible(const Vector& x, double tol = 0.0) const;
};

struct BenchmarkValue {
  double objective = 0.0;
  std::vector<double> constraints;
};

/// Written forms; each throws std::invalid_argument outside its domain.
BenchmarkValue mystery(const Vector& x);
BenchmarkValue constrained_branin(const Vector& x);
BenchmarkValue test_function_2(const Vector& x);

ProblemDefinition make_mystery();
ProblemDefinition make_constrained_branin(Sense sense = Sense::MinimizeWritten);
ProblemDefinition make_test_function_2(Sense sense = Sense::Maximize);
/// Appends `count` constraints that return the negative constant `value` everywhere.
ProblemDefinition with_redundant_constraints(ProblemDefinition base, int count = 8, double value = -1.0);

/// Registry names: mystery, branin-c, testfn2, mystery-redundant8.
std::vector<std::string> problem_names();
ProblemDefinition make_problem(std::string_view name);

}  // namespace cbo::problems
