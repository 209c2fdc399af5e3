#include <stdexcept>
#include <string>

#include "cbo/problems/problem.hpp"

namespace cbo::problems {

std::vector<std::string> problem_names() { return {"mystery", "branin-c", "testfn2", "mystery-redundant8"}; }

ProblemDefinition make_problem(std::string_view name) {
  if (name == "mystery") return make_mystery();
  if (name == "branin-c") return make_constrained_branin();
  if (name == "testfn2") return make_test_function_2();
  if (name == "mystery-redundant8") return with_redundant_constraints(make_mystery(), 8, -1.0);
  throw std::invalid_argument("unknown problem: " + std::string(name));
}

}  // namespace cbo::problems
