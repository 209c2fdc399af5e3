#include "cbo/acquisition/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace cbo::acq {

void ModelBundle::validate() const {
  for (const auto& c : constraints) {
    if (c.dim() != objective.dim()) throw std::invalid_argument("ModelBundle: input dimension mismatch");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double feasibility_from_moments(double mean, double variance) {
  if (variance <= 0.0) return mean <= 0.0 ? 1.0 : 0.0;
  return normal_cdf(-mean / std::sqrt(variance));
}

double prob_feasible_k(const gp::GpModel& constraint, const Vector& x) {
  const auto p = constraint.posterior(x);
  return feasibility_from_moments(p.mean, p.variance);
}

double prob_feasible(const ModelBundle& bundle, const Vector& x) {
  double pf = 1.0;
  for (const auto& c : bundle.constraints) pf *= prob_feasible_k(c, x);
  return pf;
}

double ei_from_moments(double mean, double sigma, double f_best) {
  const double diff = mean - f_best;
  if (!(sigma > 0.0)) return std::max(diff, 0.0);
  const double z = diff / sigma;
  return std::max(diff * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

double expected_improvement(const gp::GpModel& model, double f_best, const Vector& x) {
  const auto p = model.posterior(x);
  return ei_from_moments(p.mean, std::sqrt(p.variance), f_best);
}

double constrained_ei(const ModelBundle& bundle, double f_best_feasible, const Vector& x) {
  return expected_improvement(bundle.objective, f_best_feasible, x) * prob_feasible(bundle, x);
}

}  // namespace cbo::acq
