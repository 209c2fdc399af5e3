#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/engine/engine.hpp"
#include "cbo/problems/certify.hpp"

using namespace cbo;
using namespace cbo::engine;

namespace {

Vector vec(double a, double b) { return (Vector(2) << a, b).finished(); }

const problems::ProblemDefinition& mystery() {
  static const auto p = problems::make_mystery();
  return p;
}

const problems::ProblemDefinition& wave() {
  static const auto p = [] {
    problems::ProblemDefinition q;
    q.name = "wave";
    q.box = optim::Box(Vector::Zero(1), Vector::Ones(1));
    q.objective_written = [](const Vector& x) { return std::sin(9 * x[0]) + 0.3 * x[0]; };
    q.costs = CostVector::uniform(1);
    const auto c = problems::certify_optimum(q, 1000);
    q.true_opt_value = c.value;
    q.true_opt_location = c.location;
    return q;
  }();
  return p;
}

EngineConfig quick() {
  auto cfg = EngineConfig::desk();
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("cost vectors") {
  const auto b = CostVector::parse("5,1");
  CHECK(b.size() == 2);
  CHECK(b[0] == 5.0);
  CHECK(b.total() == 6.0);
  CHECK(b.min() == 1.0);
  CHECK(b.to_string() == "5,1");
  CHECK_THROWS(CostVector::parse("0,1"));
  CHECK_THROWS(CostVector::parse("x"));
  CHECK_THROWS_AS(CostVector({1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("ledger arithmetic") {
  EvaluationLedger ledger(CostVector{1.0, 5.0}, 20.0, true);
  ledger.record({1, {0}, vec(0, 0), {0.0}});
  ledger.record({2, {1}, vec(0, 0), {0.0}});
  ledger.record({3, {0, 1}, vec(0, 0), {0.0, 0.0}});
  CHECK(ledger.spent() == 12.0);
  CHECK(ledger.per_task_counts() == std::vector<int>{2, 2});
  CHECK(ledger.remaining() == 8.0);
  CHECK(ledger.fits(8.0));
  CHECK_FALSE(ledger.fits(8.5));
  CHECK_THROWS_AS(ledger.record({4, {}, vec(0, 0), {}}), std::invalid_argument);
  CHECK_THROWS_AS(ledger.record({4, {2}, vec(0, 0), {0.0}}), std::invalid_argument);

  EvaluationLedger excl(CostVector{1.0, 1.0}, 4.0, false);
  excl.record({0, {0, 1}, vec(0, 0), {0.0, 0.0}});
  CHECK(excl.initial_spent() == 2.0);
  CHECK(excl.budget_spent() == 0.0);
  CHECK(excl.remaining() == 4.0);
}

TEST_CASE("policy names") {
  for (auto p : {Policy::dcKG, Policy::dcKG_noCoupled, Policy::cEIplus, Policy::cEI, Policy::cKG, Policy::UCBD}) {
    CHECK(parse_policy(policy_name(p)) == p);
  }
  CHECK_THROWS_AS(parse_policy("ei"), std::invalid_argument);
  auto cfg = EngineConfig::full();
  CHECK(cfg.delta_threshold == 1e-7);
  cfg.delta_threshold = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("opportunity cost") {
  const auto& p = mystery();
  CHECK(opportunity_cost(p, p.true_opt_location, 0.0) == 0.0);
  CHECK(opportunity_cost(p, vec(0, 0), 0.0) == p.true_opt_value);
  CHECK(opportunity_cost(p, vec(0, 0), -3.0) == p.true_opt_value + 3.0);
  // On the diagonal the constraint is sin(pi/8) > 0, so the penalty branch applies.
  CHECK_FALSE(p.feasible(vec(2.5, 2.5)));
  CHECK(opportunity_cost(p, vec(2.5, 2.5), -1.0) == p.true_opt_value + 1.0);
  REQUIRE(p.feasible(vec(2.5, 1.0)));
  const double f = -2.0 - 0.01 * std::pow(1.0 - 6.25, 2) - 2.25 - 2.0 - 7.0 * std::sin(1.25) * std::sin(1.75);
  CHECK(opportunity_cost(p, vec(2.5, 1.0), 0.0) == doctest::Approx(p.true_opt_value - f).epsilon(1e-14));
}

TEST_CASE("recommendation agrees with a dense grid") {
  auto cfg = EngineConfig::full();
  cfg.seed = 1;
  auto state = initialize(mystery(), mystery().costs, 10.0, cfg);
  const auto& ctx = state.current_context(cfg);
  const auto& b = state.bundle;
  double grid_best = -1e300;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const Vector x = vec(5.0 * i / 199, 5.0 * j / 199);
      grid_best = std::max(grid_best, (b.objective.posterior_mean(x) - ctx.offset) * acq::prob_feasible(b, x));
    }
  }
  CHECK(ctx.recommendation.score >= grid_best - 1e-3);
  CHECK(mystery().box.contains(ctx.recommendation.x));
  CHECK(ctx.recommendation.feasible_truth.has_value());
}

TEST_CASE("initial design and budget edge") {
  auto cfg = quick();
  cfg.budget_includes_initial = true;
  const auto rec = run(mystery(), Policy::dcKG, 12.0, 5, cfg);
  CHECK(rec.rows.size() == 6);
  for (const auto& r : rec.rows) CHECK(r.step == 0);
  CHECK(rec.ledger.spent() == 12.0);
  CHECK_THROWS_AS(run(mystery(), Policy::dcKG, 11.0, 5, cfg), std::invalid_argument);
}

TEST_CASE("runs are deterministic and respect the budget") {
  const auto cfg = quick();
  for (auto policy : {Policy::dcKG, Policy::cEIplus, Policy::cEI, Policy::cKG, Policy::UCBD}) {
    CAPTURE(policy_name(policy));
    const auto a = run(mystery(), policy, 5.0, 7, cfg, CostVector{1.0, 2.0});
    const auto b = run(mystery(), policy, 5.0, 7, cfg, CostVector{1.0, 2.0});
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].tasks == b.rows[i].tasks);
      CHECK(a.rows[i].location == b.rows[i].location);
      CHECK(a.rows[i].oc == b.rows[i].oc);
    }
    const auto& L = a.ledger;
    double sum = 0.0;
    for (const auto& e : L.entries()) sum += L.cost_of(e.tasks);
    CHECK(L.spent() == sum);
    CHECK(L.budget_spent() <= L.budget() + L.costs().max());
    CHECK(a.rows.size() > 6);
    for (std::size_t i = 1; i < a.rows.size(); ++i) CHECK(a.rows[i].spent >= a.rows[i - 1].spent);
  }
}

TEST_CASE("coupled policies charge the full cost every step") {
  const auto rec = run(mystery(), Policy::cEI, 9.0, 2, quick(), CostVector{1.0, 2.0});
  double prev = 0.0;
  int steps = 0;
  for (const auto& r : rec.rows) {
    if (r.step == 0) continue;
    ++steps;
    CHECK(r.tasks == std::vector<std::size_t>{0, 1});
    CHECK(r.spent - prev == 3.0);
    prev = r.spent;
  }
  CHECK(steps == 3);
}

TEST_CASE("dcKG branching and threshold rule") {
  auto cfg = quick();
  auto state = initialize(mystery(), CostVector{1.0, 1.0}, 20.0, cfg);
  int coupled = 0;
  for (int i = 0; i < 8; ++i) {
    state.iteration += 1;
    const acq::ModelBundle before = state.models(cfg);
    const auto out = step_dckg(state, cfg);
    REQUIRE(out.taken);
    CHECK(out.maximizations == 3);
    if (out.coupled_branch) {
      ++coupled;
      CHECK(out.tasks.front() == 0);
      const double pf = acq::prob_feasible_k(before.constraints[0], out.location);
      const bool constraint_evaluated = out.tasks.size() == 2;
      CHECK(constraint_evaluated == (pf < 1.0 - cfg.delta_threshold));
      const double best_source = std::max(out.source_values[0], out.source_values[1]);
      CHECK(out.coupled_value > best_source);
    } else {
      REQUIRE(out.tasks.size() == 1);
      const auto k = out.tasks.front();
      CHECK(out.source_values[k] >= out.coupled_value);
      for (std::size_t j = 0; j < k; ++j) CHECK(out.source_values[j] < out.source_values[k]);
    }
  }
  MESSAGE("coupled steps: " << coupled);
}

TEST_CASE("ablation switch keeps every step single-task") {
  const auto rec = run(problems::make_test_function_2(), Policy::dcKG_noCoupled, 8.0, 1, quick());
  for (const auto& r : rec.rows) {
    if (r.step > 0) CHECK(r.tasks.size() == 1);
  }
}

TEST_CASE("cEI+ picks its location before its task") {
  auto on = quick();
  auto off = quick();
  off.include_coupled_ckg = false;
  auto s1 = initialize(mystery(), CostVector{1.0, 1.0}, 10.0, on);
  auto s2 = initialize(mystery(), CostVector{1.0, 1.0}, 10.0, off);
  s1.iteration = s2.iteration = 1;
  const auto a = step_cei_plus(s1, on);
  const auto b = step_cei_plus(s2, off);
  CHECK(a.location == b.location);
  CHECK(a.maximizations == 1);
  CHECK(a.point_evaluations == 3);
  CHECK(b.point_evaluations == 2);
  CHECK(b.tasks.size() == 1);
}

TEST_CASE("common cost factor leaves the first decision unchanged") {
  const auto cfg = quick();
  auto s1 = initialize(mystery(), CostVector{1.0, 2.0}, 10.0, cfg);
  auto s3 = initialize(mystery(), CostVector{3.0, 6.0}, 30.0, cfg);
  s1.iteration = s3.iteration = 1;
  const auto a = step_dckg(s1, cfg);
  const auto b = step_dckg(s3, cfg);
  CHECK(a.tasks == b.tasks);
  CHECK((a.location - b.location).norm() < 1e-6);
}

TEST_CASE("unconstrained problem reduces to single-task objective steps") {
  const auto cfg = quick();
  for (auto policy : {Policy::dcKG, Policy::cEIplus, Policy::cEI, Policy::cKG}) {
    const auto rec = run(wave(), policy, 4.0, 4, cfg);
    int steps = 0;
    for (const auto& r : rec.rows) {
      if (r.step == 0) continue;
      ++steps;
      CHECK(r.tasks == std::vector<std::size_t>{0});
    }
    CHECK(steps == 4);
  }
}

TEST_CASE("constant feasible constraints are settled after the initial design") {
  auto cfg = quick();
  const auto p = problems::make_problem("mystery-redundant8");
  auto state = initialize(p, p.costs, 10.0, cfg);
  const auto& b = state.models(cfg);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const Vector x = vec(u(rng), u(rng));
    for (std::size_t k = 2; k <= 9; ++k) CHECK(acq::prob_feasible_k(b.task(k), x) >= 1.0 - 1e-7);
  }
}

TEST_CASE("feasible incumbent") {
  auto cfg = quick();
  auto state = initialize(mystery(), mystery().costs, 10.0, cfg);
  double best = -1e300;
  for (Eigen::Index i = 0; i < state.data[0].X.rows(); ++i) {
    if (state.data[1].y[i] <= 0.0) best = std::max(best, state.data[0].y[i]);
  }
  if (best > -1e300) CHECK(incumbent_feasible_value(state, cfg) == best);
}
