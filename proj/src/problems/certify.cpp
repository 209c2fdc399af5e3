#include "cbo/problems/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cbo::problems {

namespace {

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  Vector x;
};

// Decodes a flat index into grid coordinates (first axis slowest).
Vector grid_point(const optim::Box& box, int resolution, long index) {
  const auto d = box.dim();
  Vector x(d);
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    const long i = index % resolution;
    index /= resolution;
    x[j] = box.lower()[j] + box.width()[j] * static_cast<double>(i) / (resolution - 1);
  }
  return x;
}

Vector central_gradient(const std::function<double(const Vector&)>& f, const optim::Box& box, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-7 * box.width()[j];
    Vector a = x, b = x;
    a[j] = std::min(x[j] + h, box.upper()[j]);
    b[j] = std::max(x[j] - h, box.lower()[j]);
    g[j] = (f(a) - f(b)) / (a[j] - b[j]);
  }
  return g;
}

// Gradient projection along the active constraints with a Newton restoration step back
// onto (just inside) the feasible set. Steps grow on success and shrink on failure.
Candidate polish(const ProblemDefinition& problem, Candidate incumbent, double initial_step, const RefineConfig& refine) {
  const auto& box = problem.box;
  const auto K = problem.num_constraints();
  const double scale = box.width().norm();
  const auto objective = [&](const Vector& x) { return problem.objective(x); };
  auto constraint = [&](std::size_t k) { return [&problem, k](const Vector& x) { return problem.constraint(k, x); }; };
  constexpr double kMargin = 1e-13;

  double step = initial_step;
  for (int round = 0; round < refine.max_rounds && step > refine.min_radius * scale; ++round) {
    const Vector& x = incumbent.x;
    const Vector g = central_gradient(objective, box, x);
    std::vector<std::size_t> active;
    std::vector<Vector> normals;
    for (std::size_t k = 1; k <= K; ++k) {
      const Vector n = central_gradient(constraint(k), box, x);
      if (problem.constraint(k, x) > -n.norm() * step) {
        active.push_back(k);
        normals.push_back(n);
      }
    }
    // Drop constraints whose multiplier says the interior is the ascent side.
    Vector dir = g;
    for (int pass = 0; pass < 4; ++pass) {
      dir = g;
      if (!normals.empty()) {
        Matrix A(static_cast<Eigen::Index>(normals.size()), x.size());
        for (std::size_t i = 0; i < normals.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = normals[i].transpose();
        const Vector lambda = (A * A.transpose()).completeOrthogonalDecomposition().solve(A * g);
        std::vector<std::size_t> keep;
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
          if (lambda[i] >= 0.0) keep.push_back(static_cast<std::size_t>(i));
        }
        if (keep.size() < normals.size() && pass < 3) {
          std::vector<std::size_t> a2;
          std::vector<Vector> n2;
          for (auto i : keep) {
            a2.push_back(active[i]);
            n2.push_back(normals[i]);
          }
          active = std::move(a2);
          normals = std::move(n2);
          continue;
        }
        dir = g - A.transpose() * lambda;
      }
      break;
    }
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if ((x[j] <= box.lower()[j] && dir[j] < 0.0) || (x[j] >= box.upper()[j] && dir[j] > 0.0)) dir[j] = 0.0;
    }
    if (!(dir.norm() > 0.0)) break;

    Vector y = box.clip(x + step * dir / dir.norm());
    for (int it = 0; it < 30; ++it) {
      std::vector<std::size_t> violated;
      for (std::size_t k = 1; k <= K; ++k) {
        if (problem.constraint(k, y) > -kMargin) violated.push_back(k);
      }
      if (violated.empty()) break;
      Matrix A(static_cast<Eigen::Index>(violated.size()), y.size());
      Vector c(A.rows());
      for (std::size_t i = 0; i < violated.size(); ++i) {
        A.row(static_cast<Eigen::Index>(i)) = central_gradient(constraint(violated[i]), box, y).transpose();
        c[static_cast<Eigen::Index>(i)] = problem.constraint(violated[i], y) + 2.0 * kMargin;
      }
      y = box.clip(y - A.transpose() * (A * A.transpose()).completeOrthogonalDecomposition().solve(c));
    }
    const double v = problem.feasible(y) ? problem.objective(y) : -std::numeric_limits<double>::infinity();
    if (v > incumbent.value) {
      incumbent = {v, y};
      step *= 2.0;
    } else {
      step *= 0.5;
    }
  }
  return incumbent;
}

}  // namespace

TrueOptimumCertificate certify_optimum(const ProblemDefinition& problem, int grid_resolution,
                                       const RefineConfig& refine, Execution exec) {
  if (grid_resolution < 2) throw std::invalid_argument("certify_optimum: resolution must be >= 2");
  const auto d = problem.dim();
  const long per_axis = grid_resolution;
  long total = 1;
  for (Eigen::Index j = 0; j < d; ++j) total *= per_axis;
  // One block per leading-axis index; each block reduces serially, blocks merge in order.
  const long blocks = per_axis;
  const long block_size = total / blocks;
  std::vector<Candidate> block_best(static_cast<std::size_t>(blocks));
  parallel_for(blocks, exec, [&](long b) {
    Candidate best;
    for (long i = b * block_size; i < (b + 1) * block_size; ++i) {
      const Vector x = grid_point(problem.box, grid_resolution, i);
      if (!problem.feasible(x)) continue;
      const double v = problem.objective(x);
      if (v > best.value) best = {v, x};
    }
    block_best[static_cast<std::size_t>(b)] = std::move(best);
  });
  Candidate incumbent;
  for (auto& c : block_best) {
    if (c.x.size() && c.value > incumbent.value) incumbent = c;
  }
  if (incumbent.x.size() == 0) throw std::runtime_error("certify_optimum: no feasible grid point");

  TrueOptimumCertificate cert;
  cert.grid_resolution = grid_resolution;
  cert.best_grid_value = incumbent.value;
  cert.best_grid_point = incumbent.x;

  // Zoom search: a local (points_per_side)^d grid around the incumbent; recentre on
  // improvement, halve the radius otherwise. Only feasible points are accepted.
  const Vector width = problem.box.width();
  Vector radius = width / (grid_resolution - 1);
  const int m = std::max(3, refine.points_per_side);
  long local_total = 1;
  for (Eigen::Index j = 0; j < d; ++j) local_total *= m;
  for (int round = 0; round < refine.max_rounds; ++round) {
    if ((radius.array() < refine.min_radius * width.array()).all()) break;
    Candidate best = incumbent;
    for (long i = 0; i < local_total; ++i) {
      long idx = i;
      Vector x(d);
      for (Eigen::Index j = d - 1; j >= 0; --j) {
        const long t = idx % m;
        idx /= m;
        x[j] = incumbent.x[j] + radius[j] * (2.0 * static_cast<double>(t) / (m - 1) - 1.0);
      }
      x = problem.box.clip(x);
      if (!problem.feasible(x)) continue;
      const double v = problem.objective(x);
      if (v > best.value) best = {v, x};
    }
    if (best.value > incumbent.value) {
      incumbent = std::move(best);
    } else {
      radius *= 0.5;
    }
  }
  incumbent = polish(problem, std::move(incumbent), radius.norm() + 1e-3 * width.norm(), refine);
  cert.value = incumbent.value;
  cert.location = incumbent.x;
  return cert;
}

}  // namespace cbo::problems
