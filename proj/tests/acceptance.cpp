#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/acquisition/lookahead.hpp"
#include "cbo/engine/engine.hpp"
#include "cbo/gp/fit.hpp"
#include "cbo/harness/aggregate.hpp"
#include "cbo/harness/experiment.hpp"
#include "cbo/harness/results_csv.hpp"
#include "cbo/problems/certify.hpp"
#include "cbo/problems/problem.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace cbo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %2d  %-34s %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id, name, out.detail.c_str(),
              secs, limit_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Vector scalar(double v) { return Vector::Constant(1, v); }

Matrix line_grid(int n) {
  Matrix g(n, 1);
  for (int i = 0; i < n; ++i) g(i, 0) = i / double(n - 1);
  return g;
}

const optim::Box unit_line(Vector::Zero(1), Vector::Ones(1));

gp::GpModel model_1d(const std::vector<double>& xs, double lengthscale, double signal, double shift,
                     gp::KernelFamily family = gp::KernelFamily::Matern52) {
  Matrix X(static_cast<Eigen::Index>(xs.size()), 1);
  Vector y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X(i, 0) = xs[static_cast<std::size_t>(i)];
    y[i] = std::sin(7.0 * X(i, 0) + shift) + 0.4 * X(i, 0);
  }
  gp::KernelParams p;
  p.family = family;
  p.signal_variance = signal;
  p.lengthscales = Vector::Constant(1, lengthscale);
  return gp::GpModel::condition(p, X, y, y.mean());
}

Outcome gp_correctness() {
  std::mt19937_64 rng(2024);
  double worst_post = 0.0, worst_grad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    const int n = 1 + (trial * 7) % 10;
    const auto family = trial % 2 ? gp::KernelFamily::SquaredExponential : gp::KernelFamily::Matern52;
    const auto p = testing::random_params(rng, d, family);
    const Matrix X = testing::uniform_points(rng, n, d);
    const Vector y = testing::uniform_points(rng, n, 1, -2.0, 2.0).col(0);
    const auto model = gp::GpModel::condition(p, X, y, 0.25);
    const Matrix Q = testing::uniform_points(rng, 5, d);
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      const auto ref = testing::dense_posterior(p, X, y, 0.25, model.noise(), Q.row(i).transpose());
      const auto got = model.posterior(Q.row(i).transpose());
      worst_post = std::max({worst_post, std::abs(got.mean - ref.mean),
                             std::abs(got.variance - std::max(ref.variance, 0.0))});
    }
    const auto lv = gp::log_marginal_likelihood(p, X, y);
    auto at = [&](const Vector& theta) {
      gp::KernelParams q = p;
      q.signal_variance = std::exp(theta[0]);
      for (int m = 0; m < d; ++m) q.lengthscales[m] = std::exp(theta[1 + m]);
      return gp::log_marginal_likelihood(q, X, y).value;
    };
    Vector theta(1 + d);
    theta[0] = std::log(p.signal_variance);
    for (int m = 0; m < d; ++m) theta[1 + m] = std::log(p.lengthscales[m]);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Vector a = theta, b = theta;
      a[i] += 1e-5;
      b[i] -= 1e-5;
      const double fd = (at(a) - at(b)) / 2e-5;
      worst_grad = std::max(worst_grad, std::abs(fd - lv.gradient[i]) / std::max(1.0, std::abs(fd)));
    }
  }
  return {worst_post < 1e-8 && worst_grad < 1e-4,
          fmt("max posterior error %.2e", worst_post) + fmt(", max gradient rel. error %.2e", worst_grad)};
}

Outcome fantasy_oracle() {
  acq::ModelBundle bundle{model_1d({0.1, 0.45, 0.8}, 0.25, 1.0, 0.0), {}};
  Matrix cx(3, 1);
  cx << 0.15, 0.5, 0.9;
  gp::KernelParams cp;
  cp.lengthscales = scalar(0.3);
  bundle.constraints.push_back(gp::GpModel::condition(cp, cx, (Vector(3) << -0.5, 0.4, -0.2).finished()));
  acq::InnerConfig inner;
  inner.candidates = line_grid(51);
  inner.utility_offset = -2.0;
  const Vector x_r = acq::current_best_location(bundle, unit_line, inner, scalar(0.5));
  const acq::LookaheadEvaluator eval(bundle, unit_line, x_r, inner);
  double worst_refit = 0.0;
  for (double xv : {0.02, 0.3, 0.62, 0.97}) {
    const auto grid = acq::make_fantasy_grid(bundle, scalar(xv), acq::FantasyMode::Coupled);
    const double oracle = testing::brute_force_gain(bundle, scalar(xv), x_r, *inner.candidates, grid, -2.0);
    worst_refit = std::max(worst_refit, std::abs(eval.ckg(scalar(xv)) - oracle));
  }

  struct Config {
    std::vector<double> xs;
    double lengthscale;
    double shift;
    double query;
  };
  const std::vector<Config> configs{{{0.1, 0.5, 0.9}, 0.2, 0.0, 0.3},
                                    {{0.2, 0.4}, 0.3, 1.0, 0.75},
                                    {{0.05, 0.3, 0.55, 0.95}, 0.15, 2.0, 0.7},
                                    {{0.5}, 0.4, 0.5, 0.1},
                                    {{0.1, 0.35, 0.6, 0.85}, 0.25, 3.0, 0.47}};
  acq::InnerConfig disc;
  disc.candidates = line_grid(101);
  int within = 0;
  std::string ratios;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& c = configs[i];
    acq::ModelBundle b{model_1d(c.xs, c.lengthscale, 1.0, c.shift), {}};
    const double fantasy = acq::kg(b, scalar(c.query), unit_line, disc);
    const double mc = testing::monte_carlo_kg(b.objective, scalar(c.query), *disc.candidates, 100000, 77 + i);
    const double rel = std::abs(fantasy - mc) / mc;
    if (rel <= 0.10) ++within;
    ratios += (i ? "," : "") + fmt("%.3f", fantasy / mc);
  }
  return {worst_refit < 1e-8 && within == static_cast<int>(configs.size()),
          fmt("refit error %.2e", worst_refit) + "; KG/MC ratios " + ratios + " (" + std::to_string(within) +
              "/5 within 10%)"};
}

Outcome reductions() {
  std::mt19937_64 rng(5);
  const Matrix X = testing::uniform_points(rng, 6, 1);
  const Vector y = (X.col(0).array() * 5.0).sin();
  gp::FitOptions fo;
  fo.input_width = Vector::Ones(1);
  acq::ModelBundle unc{gp::fit(X, y, fo), {}};
  acq::InnerConfig inner;
  inner.candidates = line_grid(101);
  double ei_gap = 0.0, ckg_gap = 0.0, dckg_gap = 0.0;
  bool scale_exact = true;
  for (int i = 0; i < 20; ++i) {
    const Vector x = scalar(i / 19.0);
    ei_gap = std::max(ei_gap, std::abs(acq::constrained_ei(unc, 0.3, x) - acq::expected_improvement(unc.objective, 0.3, x)));
    const double k = acq::kg(unc, x, unit_line, inner);
    const Vector x_r = acq::current_best_location(unc, unit_line, inner, x);
    ckg_gap = std::max(ckg_gap, std::abs(acq::ckg(unc, x, x_r, unit_line, inner) - k));
    dckg_gap = std::max(dckg_gap, std::abs(acq::dckg_source(unc, x, 0, x_r, 1.0, unit_line, inner) - k));
  }
  acq::ModelBundle con{unc.objective, {gp::fit(X, (X.col(0).array() * 3.0).cos(), fo)}};
  const acq::LookaheadEvaluator eval(con, unit_line, scalar(0.4), inner);
  for (int i = 0; i < 10; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      const double one = eval.dckg(scalar(i / 9.0), k, 1.0);
      for (double b : {0.5, 2.0, 5.0}) scale_exact = scale_exact && eval.dckg(scalar(i / 9.0), k, b) == one / b;
    }
  }
  const bool ok = ei_gap <= 1e-6 && ckg_gap <= 1e-6 && dckg_gap <= 1e-6 && scale_exact;
  return {ok, fmt("cEI-EI %.1e", ei_gap) + fmt(", cKG-KG %.1e", ckg_gap) + fmt(", dcKG0-KG %.1e", dckg_gap) +
                  (scale_exact ? ", cost scaling exact" : ", cost scaling inexact")};
}

Outcome nonnegativity() {
  double worst = 1e300;
  for (const char* name : {"mystery", "branin-c", "testfn2"}) {
    const auto p = problems::make_problem(name);
    auto cfg = engine::EngineConfig::desk();
    cfg.seed = 17;
    auto state = engine::initialize(p, p.costs, 10.0, cfg);
    const auto& ctx = state.current_context(cfg);
    acq::InnerConfig inner;
    inner.search = cfg.inner_cfg;
    inner.utility_offset = ctx.offset;
    inner.seed = 99;
    const acq::LookaheadEvaluator eval(state.bundle, p.box, ctx.recommendation.x, inner);
    std::mt19937_64 rng(3);
    const Matrix pts = p.box.from_unit_rows(testing::uniform_points(rng, 50, 2));
    for (Eigen::Index i = 0; i < pts.rows(); ++i) worst = std::min(worst, eval.ckg(pts.row(i).transpose()));
  }
  return {worst >= -1e-6, fmt("min cKG over 150 points %.3e", worst)};
}

harness::ExperimentSpec spec(const std::string& problem, std::vector<engine::Policy> policies, double budget,
                             int reps) {
  harness::ExperimentSpec s;
  s.problem = problem;
  s.policies = std::move(policies);
  s.budget = budget;
  s.replications = reps;
  s.base_seed = 1000;
  return s;
}

int post_initial_count(const engine::EvaluationLedger& ledger, std::size_t task) {
  int n = 0;
  for (const auto& e : ledger.entries()) {
    if (e.iteration == 0) continue;
    for (auto t : e.tasks) n += t == task;
  }
  return n;
}

Outcome redundant() {
  const auto res = harness::run_experiment(spec("mystery-redundant8", {engine::Policy::dcKG}, 40.0, 10),
                                           engine::EngineConfig::desk());
  int good = 0;
  int worst = 0;
  for (const auto& r : res[0].records) {
    bool ok = true;
    for (std::size_t k = 2; k <= 9; ++k) {
      const int c = post_initial_count(r.ledger, k);
      worst = std::max(worst, c);
      ok = ok && c <= 1;
    }
    good += ok;
  }
  return {good >= 9, std::to_string(good) + "/" + std::to_string(res[0].records.size()) +
                         " runs with <= 1 redundant evaluation each; max per constraint " + std::to_string(worst)};
}

double median_initial_oc(const std::vector<engine::RunRecord>& recs) {
  std::vector<double> v;
  for (const auto& r : recs) v.push_back(r.rows.front().oc);
  return harness::percentile(v, 50);
}

double median_final_oc(const std::vector<engine::RunRecord>& recs) {
  std::vector<double> v;
  for (const auto& r : recs) v.push_back(r.rows.back().oc);
  return harness::percentile(v, 50);
}

Outcome ordering() {
  const auto res = harness::run_experiment(spec("mystery", {engine::Policy::dcKG, engine::Policy::cEI}, 60.0, 10),
                                           engine::EngineConfig::desk());
  const double d0 = median_initial_oc(res[0].records), d1 = median_final_oc(res[0].records);
  const double c0 = median_initial_oc(res[1].records), c1 = median_final_oc(res[1].records);
  const bool ok = res[0].records.size() == 10 && res[1].records.size() == 10 && d1 <= c1 && d1 <= 0.5 * d0 &&
                  c1 <= 0.5 * c0;
  return {ok, fmt("dcKG median OC %.4g", d0) + fmt(" -> %.4g", d1) + fmt("; cEI %.4g", c0) + fmt(" -> %.4g", c1)};
}

Outcome heterogeneous() {
  auto s = spec("mystery", {engine::Policy::dcKG}, 60.0, 10);
  s.costs = engine::CostVector{5.0, 1.0};
  const auto res = harness::run_experiment(s, engine::EngineConfig::desk());
  int good = 0;
  std::string counts;
  for (const auto& r : res[0].records) {
    const auto& c = r.ledger.per_task_counts();
    good += c[0] < c[1];
    counts += " " + std::to_string(c[0]) + "/" + std::to_string(c[1]);
  }
  return {good >= 8, std::to_string(good) + "/10 runs with fewer objective evaluations (f/c:" + counts + ")"};
}

Outcome ablation() {
  auto off = spec("testfn2", {engine::Policy::dcKG}, 40.0, 5);
  off.include_coupled_ckg = false;
  const auto r_off = harness::run_experiment(off, engine::EngineConfig::desk());
  bool single = true;
  for (const auto& r : r_off[0].records) {
    for (const auto& e : r.ledger.entries()) single = single && (e.iteration == 0 || e.tasks.size() == 1);
  }
  const auto r_on = harness::run_experiment(spec("testfn2", {engine::Policy::dcKG}, 40.0, 5),
                                            engine::EngineConfig::desk());
  int with_multi = 0;
  for (const auto& r : r_on[0].records) {
    bool multi = false;
    for (const auto& e : r.ledger.entries()) multi = multi || (e.iteration > 0 && e.tasks.size() > 1);
    with_multi += multi;
  }
  return {single && with_multi >= 3, std::string(single ? "switch off: all steps single-task" : "switch off: multi-task step seen") +
                                         "; switch on: " + std::to_string(with_multi) + "/5 runs with a multi-task step"};
}

Outcome determinism() {
  auto s = spec("mystery", {engine::Policy::dcKG, engine::Policy::cEIplus, engine::Policy::UCBD}, 10.0, 3);
  const auto dir = std::filesystem::temp_directory_path() / "cbo_acceptance_determinism";
  std::vector<std::string> texts;
  for (int rep = 0; rep < 2; ++rep) {
    std::filesystem::remove_all(dir);
    s.output = dir;
    harness::run_experiment(s, engine::EngineConfig::desk());
    std::string all;
    for (const char* f : {"dckg.csv", "cei-plus.csv", "ucbd.csv", "dckg_aggregate.csv"}) {
      std::ifstream in(dir / f, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      all += ss.str();
    }
    texts.push_back(all);
  }
  return {!texts[0].empty() && texts[0] == texts[1], std::to_string(texts[0].size()) + " bytes compared"};
}

Outcome certificates() {
  double worst = 0.0;
  std::string detail;
  for (const char* name : {"mystery", "branin-c", "testfn2"}) {
    const auto p = problems::make_problem(name);
    const auto a = problems::certify_optimum(p, 1000);
    const auto b = problems::certify_optimum(p, 2000);
    worst = std::max(worst, std::abs(a.value - b.value));
  }
  const auto tf2 = problems::make_problem("testfn2");
  const Vector& x = tf2.true_opt_location;
  const double c1 = tf2.constraint(1, x), c2 = tf2.constraint(2, x), c3 = tf2.constraint(3, x);
  const bool pattern = (std::abs(c1) < 1e-3 || std::abs(c3) < 1e-3) && c2 < -1e-3;
  const int active = (std::abs(c1) < 1e-3) + (std::abs(c2) < 1e-3) + (std::abs(c3) < 1e-3);
  return {worst < 1e-6 && pattern, fmt("max change on doubling %.2e", worst) + fmt("; TF2 c1=%.3g", c1) +
                                       fmt(" c2=%.3g", c2) + fmt(" c3=%.2e", c3) + fmt(" (%.0f active)", active)};
}

}  // namespace

int main() {
  criterion(1, "GP correctness", 10, gp_correctness);
  criterion(2, "fantasy oracle", 120, fantasy_oracle);
  criterion(3, "reduction suite", 60, reductions);
  criterion(4, "cKG nonnegativity", 120, nonnegativity);
  criterion(5, "redundant constraints", 1800, redundant);
  criterion(6, "qualitative ordering", 3600, ordering);
  criterion(7, "heterogeneous costs", 3600, heterogeneous);
  criterion(8, "ablation switch", 3600, ablation);
  criterion(9, "determinism", 600, determinism);
  criterion(10, "optimum certificates", 120, certificates);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
