#pragma once

#include "cbo/acquisition/bundle.hpp"
#include "cbo/common.hpp"

namespace cbo::acq {

double normal_cdf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

/// P(c <= 0) for c ~ N(mean, variance). A degenerate variance gives a step at 0.
double feasibility_from_moments(double mean, double variance);

/// Phi(-mu / sigma) for a single constraint model.
double prob_feasible_k(const gp::GpModel& constraint, const Vector& x);
/// Product of the per-constraint feasibility probabilities (1 when K = 0).
double prob_feasible(const ModelBundle& bundle, const Vector& x);

/// Closed-form EI for maximization; sigma = 0 gives max(mu - f_best, 0).
double ei_from_moments(double mean, double sigma, double f_best);
double expected_improvement(const gp::GpModel& model, double f_best, const Vector& x);
/// EI of the objective weighted by the probability of feasibility.
double constrained_ei(const ModelBundle& bundle, double f_best_feasible, const Vector& x);

}  // namespace cbo::acq
