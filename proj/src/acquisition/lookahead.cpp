#include "cbo/acquisition/lookahead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/gp/kernel.hpp"
#include "cbo/optim/sampling.hpp"

namespace cbo::acq {

Matrix inner_base_candidates(const optim::Box& box, const InnerConfig& cfg) {
  if (cfg.candidates) {
    if (cfg.candidates->cols() != box.dim()) throw std::invalid_argument("InnerConfig: candidate dimension mismatch");
    return *cfg.candidates;
  }
  const int n = std::max(1, cfg.search.raw_samples);
  Matrix base = box.from_unit_rows(optim::sobol_sample(static_cast<int>(box.dim()), n, cfg.seed));
  if (!cfg.search.seed_points.empty()) {
    Matrix extended(base.rows() + static_cast<Eigen::Index>(cfg.search.seed_points.size()), base.cols());
    extended.topRows(base.rows()) = base;
    for (std::size_t i = 0; i < cfg.search.seed_points.size(); ++i) {
      extended.row(base.rows() + static_cast<Eigen::Index>(i)) = box.clip(cfg.search.seed_points[i]).transpose();
    }
    return extended;
  }
  return base;
}

LookaheadEvaluator::LookaheadEvaluator(const ModelBundle& bundle, optim::Box box, Vector x_r, InnerConfig cfg)
    : bundle_(&bundle), box_(std::move(box)), x_r_(std::move(x_r)), cfg_(std::move(cfg)) {
  bundle.validate();
  if (x_r_.size() != box_.dim() || bundle.dim() != box_.dim()) {
    throw std::invalid_argument("LookaheadEvaluator: dimension mismatch");
  }
  refine_ = !cfg_.candidates && cfg_.search.max_iters > 0;
  const Matrix base = inner_base_candidates(box_, cfg_);
  candidates_.resize(base.rows() + 1, base.cols());
  candidates_.topRows(base.rows()) = base;
  candidates_.row(base.rows()) = x_r_.transpose();
  xr_index_ = base.rows();

  const auto n_cand = candidates_.rows();
  cache_.resize(bundle.num_tasks());
  for (std::size_t j = 0; j < bundle.num_tasks(); ++j) {
    const auto& model = bundle.task(j);
    const auto& params = model.params();
    const auto& X = model.train_x();
    Matrix cross(X.rows(), n_cand);
    for (Eigen::Index c = 0; c < n_cand; ++c) {
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        cross(i, c) = gp::kernel_from_r2(params, gp::weighted_r2(params, X.row(i), candidates_.row(c)));
      }
    }
    TaskCache& tc = cache_[j];
    tc.half = model.cov_factor().triangularView<Eigen::Lower>().solve(cross);
    tc.mean = (cross.transpose() * model.alpha()).array() + model.prior_mean();
    tc.variance.resize(n_cand);
    for (Eigen::Index c = 0; c < n_cand; ++c) {
      tc.variance[c] = gp::GpModel::clamp_variance(params.signal_variance - tc.half.col(c).squaredNorm(),
                                                   params.signal_variance);
    }
  }
  coupled_ = fantasy_template(bundle.num_constraints(), FantasyMode::Coupled);
  for (std::size_t k = 0; k < bundle.num_tasks(); ++k) {
    single_.push_back(fantasy_template(bundle.num_constraints(), FantasyMode::SingleSource, k));
  }
}

std::vector<LookaheadEvaluator::TaskAtX> LookaheadEvaluator::prepare(const Vector& x) const {
  if (x.size() != box_.dim()) throw std::invalid_argument("LookaheadEvaluator: dimension mismatch");
  const auto n_cand = candidates_.rows();
  std::vector<TaskAtX> out(bundle_->num_tasks());
  for (std::size_t j = 0; j < bundle_->num_tasks(); ++j) {
    const auto& model = bundle_->task(j);
    const auto& params = model.params();
    const Vector k = gp::cross_covariance(params, model.train_x(), x);
    TaskAtX& t = out[j];
    t.half = model.half_solve(k);
    t.mean = model.prior_mean() + k.dot(model.alpha());
    const double var = gp::GpModel::clamp_variance(params.signal_variance - t.half.squaredNorm(),
                                                   params.signal_variance);
    t.sd = std::sqrt(var);
    t.innovation = var + model.noise();

    t.cov.resize(n_cand + 1);
    t.cov.head(n_cand).noalias() = -cache_[j].half.transpose() * t.half;
    for (Eigen::Index c = 0; c < n_cand; ++c) {
      t.cov[c] += gp::kernel_from_r2(params, gp::weighted_r2(params, candidates_.row(c), x));
    }
    t.cov[n_cand] = var;
    t.mean_c.resize(n_cand + 1);
    t.mean_c.head(n_cand) = cache_[j].mean;
    t.mean_c[n_cand] = t.mean;
    t.var_c.resize(n_cand + 1);
    t.var_c.head(n_cand) = cache_[j].variance;
    t.var_c[n_cand] = var;
  }
  return out;
}

namespace {

// Coefficient of the rank-one mean update: (y - mu(x)) / (sigma^2(x) + noise).
inline double update_coefficient(double sd, double z, double innovation) { return sd * z / innovation; }

}  // namespace

double LookaheadEvaluator::utility_on_candidate(const std::vector<TaskAtX>& at_x, const FantasyDescriptor& f,
                                                Eigen::Index i) const {
  const auto& obj = at_x[0];
  double mean0 = obj.mean_c[i];
  if (f.conditions(0)) mean0 += obj.cov[i] * update_coefficient(obj.sd, f.z[0], obj.innovation);
  double pf = 1.0;
  for (std::size_t k = 1; k < at_x.size(); ++k) {
    const auto& t = at_x[k];
    double mean = t.mean_c[i];
    double var = t.var_c[i];
    if (f.conditions(k)) {
      const auto kk = static_cast<Eigen::Index>(k);
      mean += t.cov[i] * update_coefficient(t.sd, f.z[kk], t.innovation);
      var = std::max(var - t.cov[i] * t.cov[i] / t.innovation, 0.0);
    }
    pf *= feasibility_from_moments(mean, var);
  }
  return (mean0 - cfg_.utility_offset) * pf;
}

double LookaheadEvaluator::utility_at(const std::vector<TaskAtX>& at_x, const Vector& x, const FantasyDescriptor& f,
                                      const Vector& q) const {
  double mean0 = 0.0;
  double pf = 1.0;
  for (std::size_t j = 0; j < at_x.size(); ++j) {
    const auto& model = bundle_->task(j);
    const auto& params = model.params();
    const Vector k = gp::cross_covariance(params, model.train_x(), q);
    const Vector h = model.half_solve(k);
    double mean = model.prior_mean() + k.dot(model.alpha());
    double var = std::max(params.signal_variance - h.squaredNorm(), 0.0);
    if (f.conditions(j)) {
      const auto& t = at_x[j];
      const double cov = gp::kernel_eval(params, q, x) - h.dot(t.half);
      mean += cov * update_coefficient(t.sd, f.z[static_cast<Eigen::Index>(j)], t.innovation);
      var = std::max(var - cov * cov / t.innovation, 0.0);
    }
    if (j == 0) {
      mean0 = mean;
    } else {
      pf *= feasibility_from_moments(mean, var);
    }
  }
  return (mean0 - cfg_.utility_offset) * pf;
}

double LookaheadEvaluator::best_for_fantasy(const std::vector<TaskAtX>& at_x, const Vector& x,
                                            const FantasyDescriptor& f) const {
  const auto n_all = candidates_.rows() + 1;
  Vector values(n_all);
  for (Eigen::Index i = 0; i < n_all; ++i) values[i] = utility_on_candidate(at_x, f, i);
  double best = values.maxCoeff();
  if (!refine_) return best;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_all));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
  optim::Objective inner;
  inner.value = [&](const Vector& q) { return utility_at(at_x, x, f, q); };
  const auto n_restarts = std::min<std::size_t>(static_cast<std::size_t>(cfg_.search.num_restarts), order.size());
  for (std::size_t r = 0; r < n_restarts; ++r) {
    const auto idx = order[r];
    const Vector start = idx < candidates_.rows() ? Vector(candidates_.row(idx).transpose()) : x;
    const auto res = optim::local_maximize(inner, box_, start, cfg_.search.method, cfg_.search.max_iters);
    if (std::isfinite(res.value)) best = std::max(best, res.value);
  }
  return best;
}

double LookaheadEvaluator::expected_gain(const Vector& x, const FantasyGrid& grid) const {
  const auto at_x = prepare(x);
  const auto n_f = static_cast<long>(grid.combined.size());
  std::vector<double> gains(grid.combined.size());
  parallel_for(n_f, cfg_.exec, [&](long fi) {
    const auto& f = grid.combined[static_cast<std::size_t>(fi)];
    // The subtrahend keeps the current objective mean at x_r; only PF sees the fantasy.
    FantasyDescriptor constraints_only = f;
    constraints_only.z[0] = std::numeric_limits<double>::quiet_NaN();
    const double baseline = utility_on_candidate(at_x, constraints_only, xr_index_);
    gains[static_cast<std::size_t>(fi)] = best_for_fantasy(at_x, x, f) - baseline;
  });
  double total = 0.0;
  for (double g : gains) total += g;
  return total / static_cast<double>(gains.size());
}

double LookaheadEvaluator::dckg(const Vector& x, std::size_t source, double cost) const {
  if (!(cost > 0.0)) throw std::invalid_argument("dckg: cost must be positive");
  if (source >= single_.size()) throw std::invalid_argument("dckg: source index out of range");
  return expected_gain(x, single_[source]) / cost;
}

Vector current_best_location(const ModelBundle& bundle, const optim::Box& box, const InnerConfig& cfg,
                             const Vector& extra) {
  Matrix cands = inner_base_candidates(box, cfg);
  cands.conservativeResize(cands.rows() + 1, Eigen::NoChange);
  cands.row(cands.rows() - 1) = box.clip(extra).transpose();
  auto utility = [&](const Vector& q) {
    return (bundle.objective.posterior_mean(q) - cfg.utility_offset) * prob_feasible(bundle, q);
  };
  Eigen::Index best_i = 0;
  double best = -std::numeric_limits<double>::infinity();
  Vector values(cands.rows());
  for (Eigen::Index i = 0; i < cands.rows(); ++i) {
    values[i] = utility(cands.row(i).transpose());
    if (values[i] > best) {
      best = values[i];
      best_i = i;
    }
  }
  Vector best_x = cands.row(best_i).transpose();
  if (cfg.candidates || cfg.search.max_iters == 0) return best_x;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(cands.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
  optim::Objective obj;
  obj.value = utility;
  const auto n_restarts = std::min<std::size_t>(static_cast<std::size_t>(cfg.search.num_restarts), order.size());
  for (std::size_t r = 0; r < n_restarts; ++r) {
    const auto res = optim::local_maximize(obj, box, cands.row(order[r]).transpose(), cfg.search.method,
                                           cfg.search.max_iters);
    if (res.value > best) {
      best = res.value;
      best_x = res.x;
    }
  }
  return best_x;
}

double kg(const ModelBundle& bundle, const Vector& x, const optim::Box& box, const InnerConfig& cfg) {
  if (bundle.num_constraints() != 0) throw std::invalid_argument("kg: expects an unconstrained bundle");
  const Vector x_r = current_best_location(bundle, box, cfg, x);
  const LookaheadEvaluator eval(bundle, box, x_r, cfg);
  const double value = eval.dckg(x, 0, 1.0);
  return std::max(value, 0.0);
}

double ckg(const ModelBundle& bundle, const Vector& x, const Vector& x_r, const optim::Box& box,
           const InnerConfig& cfg) {
  return LookaheadEvaluator(bundle, box, x_r, cfg).ckg(x);
}

double dckg_source(const ModelBundle& bundle, const Vector& x, std::size_t k, const Vector& x_r, double cost,
                   const optim::Box& box, const InnerConfig& cfg) {
  return LookaheadEvaluator(bundle, box, x_r, cfg).dckg(x, k, cost);
}

}  // namespace cbo::acq
