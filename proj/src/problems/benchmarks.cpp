#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cbo/problems/certify.hpp"
#include "cbo/problems/problem.hpp"

namespace cbo::problems {

namespace {

constexpr double kPi = std::numbers::pi;

void require_inside(const optim::Box& box, const Vector& x, const char* name) {
  if (x.size() != box.dim()) throw std::invalid_argument(std::string(name) + ": dimension mismatch");
  const double tol = 1e-12 * (1.0 + box.width().maxCoeff());
  if (!box.contains(x, tol)) throw std::invalid_argument(std::string(name) + ": point outside the domain");
}

const optim::Box& mystery_box() {
  static const optim::Box box(Vector::Constant(2, 0.0), Vector::Constant(2, 5.0));
  return box;
}
const optim::Box& branin_box() {
  static const optim::Box box((Vector(2) << -5.0, 0.0).finished(), (Vector(2) << 10.0, 15.0).finished());
  return box;
}
const optim::Box& tf2_box() {
  static const optim::Box box(Vector::Constant(2, 0.0), Vector::Constant(2, 1.0));
  return box;
}

ProblemDefinition assemble(std::string name, optim::Box box, ScalarFunction objective,
                           std::vector<ScalarFunction> constraints, Sense sense) {
  ProblemDefinition p;
  p.name = std::move(name);
  p.box = std::move(box);
  p.objective_written = std::move(objective);
  p.constraints = std::move(constraints);
  p.costs = engine::CostVector::uniform(p.constraints.size() + 1);
  p.sense = sense;
  const auto cert = certify_optimum(p);
  p.true_opt_value = cert.value;
  p.true_opt_location = cert.location;
  return p;
}

}  // namespace

double ProblemDefinition::objective(const Vector& x) const {
  const double f = objective_written(x);
  return sense == Sense::Maximize ? f : -f;
}

double ProblemDefinition::constraint(std::size_t k, const Vector& x) const {
  if (k < 1 || k > constraints.size()) throw std::invalid_argument("constraint index out of range");
  return constraints[k - 1](x);
}

double ProblemDefinition::evaluate_task(std::size_t task, const Vector& x) const {
  return task == 0 ? objective(x) : constraint(task, x);
}

bool ProblemDefinition::feasible(const Vector& x, double tol) const {
  for (const auto& c : constraints) {
    if (c(x) > tol) return false;
  }
  return true;
}

BenchmarkValue mystery(const Vector& x) {
  require_inside(mystery_box(), x, "mystery");
  const double x1 = x[0];
  const double x2 = x[1];
  const double f = -2.0 - 0.01 * std::pow(x2 - x1 * x1, 2) - std::pow(1.0 - x1, 2) - 2.0 * std::pow(2.0 - x2, 2) -
                   7.0 * std::sin(0.5 * x1) * std::sin(0.7 * x1 * x2);
  return {f, {-std::sin(x1 - x2 - kPi / 8.0)}};
}

BenchmarkValue constrained_branin(const Vector& x) {
  require_inside(branin_box(), x, "constrained_branin");
  const double x1 = x[0];
  const double x2 = x[1];
  const double f = std::pow(x1 - 10.0, 2) + std::pow(x2 - 15.0, 2);
  const double inner = x2 - 5.1 / (4.0 * kPi * kPi) * x1 * x1 + 5.0 / kPi * x1 - 6.0;
  const double c = inner * inner + 10.0 * (1.0 - 1.0 / (8.0 * kPi)) * std::cos(x1) + 5.0;
  return {f, {c}};
}

BenchmarkValue test_function_2(const Vector& x) {
  require_inside(tf2_box(), x, "test_function_2");
  const double x1 = x[0];
  const double x2 = x[1];
  const double f = std::pow(x1 - 1.0, 2) + std::pow(x2 - 0.5, 2);
  return {f,
          {std::pow(x1 - 3.0, 2) + std::pow(x2 + 1.0, 2) - 12.0, 10.0 * x1 + x2 - 7.0,
           std::pow(x1 - 0.5, 2) + std::pow(x2 - 0.5, 2) - 0.2}};
}

ProblemDefinition make_mystery() {
  return assemble("mystery", mystery_box(), [](const Vector& x) { return mystery(x).objective; },
                  {[](const Vector& x) { return mystery(x).constraints[0]; }}, Sense::Maximize);
}

ProblemDefinition make_constrained_branin(Sense sense) {
  return assemble("branin-c", branin_box(), [](const Vector& x) { return constrained_branin(x).objective; },
                  {[](const Vector& x) { return constrained_branin(x).constraints[0]; }}, sense);
}

ProblemDefinition make_test_function_2(Sense sense) {
  std::vector<ScalarFunction> cons;
  for (std::size_t k = 0; k < 3; ++k) {
    cons.emplace_back([k](const Vector& x) { return test_function_2(x).constraints[k]; });
  }
  return assemble("testfn2", tf2_box(), [](const Vector& x) { return test_function_2(x).objective; },
                  std::move(cons), sense);
}

ProblemDefinition with_redundant_constraints(ProblemDefinition base, int count, double value) {
  if (count < 1) throw std::invalid_argument("with_redundant_constraints: count must be >= 1");
  if (!(value < 0.0)) throw std::invalid_argument("with_redundant_constraints: value must be negative");
  const optim::Box box = base.box;
  for (int i = 0; i < count; ++i) {
    base.constraints.emplace_back([box, value](const Vector& x) {
      require_inside(box, x, "redundant constraint");
      return value;
    });
  }
  base.costs = engine::CostVector::uniform(base.constraints.size() + 1);
  base.name += "-redundant" + std::to_string(count);
  return base;
}

}  // namespace cbo::problems
