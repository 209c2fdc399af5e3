#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cbo/acquisition/analytic.hpp"
#include "cbo/acquisition/bundle.hpp"
#include "cbo/acquisition/fantasy.hpp"
#include "helpers.hpp"

namespace testing {

// GP whose posterior over any bounded query region equals N(mean, variance): one training
// point placed far away under a squared-exponential kernel.
inline cbo::gp::GpModel constant_gp(int d, double mean, double variance) {
  cbo::gp::KernelParams p;
  p.family = cbo::gp::KernelFamily::SquaredExponential;
  p.signal_variance = variance;
  p.lengthscales = Vector::Ones(d);
  p.noise_variance = 1e-4;
  const Matrix X = Matrix::Constant(1, d, 1e3);
  return cbo::gp::GpModel::condition(p, X, Vector::Constant(1, mean), mean);
}

// Expected gain over the grid's fantasies, rebuilding every conditioned GP from its
// augmented dataset and scanning the candidate rows exhaustively.
inline double brute_force_gain(const cbo::acq::ModelBundle& bundle, const Vector& x, const Vector& x_r,
                               const Matrix& candidates, const cbo::acq::FantasyGrid& grid, double offset) {
  Matrix pts(candidates.rows() + 2, candidates.cols());
  pts.topRows(candidates.rows()) = candidates;
  pts.row(candidates.rows()) = x_r.transpose();
  pts.row(candidates.rows() + 1) = x.transpose();
  double total = 0.0;
  for (const auto& f : grid.combined) {
    std::vector<cbo::gp::GpModel> models;
    for (std::size_t j = 0; j < bundle.num_tasks(); ++j) {
      const auto idx = static_cast<Eigen::Index>(j);
      models.push_back(f.conditions(j) ? refit_with(bundle.task(j), x, f.values[idx]) : bundle.task(j));
    }
    auto utility = [&](const Vector& q, bool objective_conditioned) {
      const double mu = objective_conditioned ? models[0].posterior_mean(q) : bundle.objective.posterior_mean(q);
      double pf = 1.0;
      for (std::size_t k = 1; k < models.size(); ++k) {
        const auto pr = models[k].posterior(q);
        pf *= cbo::acq::feasibility_from_moments(pr.mean, pr.variance);
      }
      return (mu - offset) * pf;
    };
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) best = std::max(best, utility(pts.row(i).transpose(), true));
    total += best - utility(x_r, false);
  }
  return total / static_cast<double>(grid.combined.size());
}

// Monte-Carlo knowledge gradient on a discrete domain: y ~ N(mu(x), sigma^2(x) + noise).
inline double monte_carlo_kg(const cbo::gp::GpModel& model, const Vector& x, const Matrix& domain, int samples,
                             std::uint64_t seed) {
  Matrix pts(domain.rows() + 1, domain.cols());
  pts.topRows(domain.rows()) = domain;
  pts.row(domain.rows()) = x.transpose();
  const auto n = pts.rows();
  Vector mu(n), cov(n);
  const auto px = model.posterior(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector q = pts.row(i).transpose();
    mu[i] = model.posterior_mean(q);
    cov[i] = model.posterior_covariance(q, x);
  }
  const double s = px.variance + model.noise();
  const Vector slope = cov / std::sqrt(s);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  double acc = 0.0;
  for (int m = 0; m < samples; ++m) {
    const double z = n01(rng);
    acc += (mu + slope * z).maxCoeff();
  }
  return acc / samples - mu.maxCoeff();
}

}  // namespace testing
