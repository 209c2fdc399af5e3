#include "cbo/optim/maximize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cbo/optim/sampling.hpp"

namespace cbo::optim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double fd_gradient(const Objective& f, const Box& box, const Vector& x, Vector& gradient) {
  const double fx = f.value(x);
  gradient.resize(x.size());
  const Vector w = box.width();
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * w[i];
    const double hi = std::min(x[i] + h, box.upper()[i]);
    const double lo = std::max(x[i] - h, box.lower()[i]);
    probe[i] = hi;
    const double f_hi = f.value(probe);
    probe[i] = lo;
    const double f_lo = f.value(probe);
    probe[i] = x[i];
    gradient[i] = (f_hi - f_lo) / (hi - lo);
  }
  return fx;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

// Projected limited-memory BFGS on -f with an Armijo backtracking search along the
// projection arc. Components pinned at a bound by the gradient are frozen per step.
MaximizeResult quasi_newton(const Objective& f, const Box& box, Vector x, int max_iters) {
  constexpr std::size_t kMemory = 10;
  const Vector w = box.width();
  x = box.clip(x);
  Vector g;
  double fx = -value_and_gradient(f, box, x, g);
  g = -g;
  if (!std::isfinite(fx) || !all_finite(g)) return {x, std::isfinite(fx) ? -fx : kNegInf};

  std::deque<std::pair<Vector, Vector>> memory;
  for (int it = 0; it < max_iters; ++it) {
    const Vector pg = x - box.clip(x - g);
    if (pg.cwiseQuotient(w).lpNorm<Eigen::Infinity>() < 1e-12) break;

    Eigen::Array<bool, Eigen::Dynamic, 1> active(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      active[i] = (x[i] <= box.lower()[i] && g[i] > 0) || (x[i] >= box.upper()[i] && g[i] < 0);
    }
    auto mask = [&](Vector v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (active[i]) v[i] = 0.0;
      }
      return v;
    };

    Vector q = mask(g);
    std::vector<double> alphas(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / y.dot(s);
      alphas[m] = rho * s.dot(q);
      q -= alphas[m] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / y.dot(s);
      const double beta = rho * y.dot(q);
      q += (alphas[m] - beta) * s;
    }
    Vector dir = mask(-q);
    if (!(dir.dot(g) < 0.0)) {
      dir = mask(-g);
      memory.clear();
    }
    double step = 1.0;
    if (memory.empty()) {
      const double scaled = dir.cwiseQuotient(w).lpNorm<Eigen::Infinity>();
      if (scaled > 0.0) step = std::min(1.0, 0.1 / scaled);
    }

    Vector x_new;
    Vector g_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = box.clip(x + step * dir);
      const double decrease = g.dot(x_new - x);
      if (!(decrease < 0.0)) break;
      f_new = -value_and_gradient(f, box, x_new, g_new);
      if (std::isfinite(f_new) && all_finite(g_new) && f_new <= fx + 1e-4 * decrease) {
        g_new = -g_new;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Vector s = x_new - x;
    const Vector y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    const double gain = fx - f_new;
    x = x_new;
    g = g_new;
    fx = f_new;
    if (gain <= 1e-13 * (1.0 + std::abs(fx)) &&
        s.cwiseQuotient(w).lpNorm<Eigen::Infinity>() < 1e-10) {
      break;
    }
  }
  return {x, -fx};
}

MaximizeResult adam(const Objective& f, const Box& box, Vector x, int max_iters) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  const Vector lr = 0.05 * box.width();
  x = box.clip(x);
  Vector m = Vector::Zero(x.size());
  Vector v = Vector::Zero(x.size());
  Vector g;
  MaximizeResult best{x, kNegInf};
  for (int t = 1; t <= max_iters + 1; ++t) {
    const double fx = value_and_gradient(f, box, x, g);
    if (std::isfinite(fx) && fx > best.value) best = {x, fx};
    if (t > max_iters || !std::isfinite(fx) || !all_finite(g)) break;
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    const Vector m_hat = m / (1.0 - std::pow(kBeta1, t));
    const Vector v_hat = v / (1.0 - std::pow(kBeta2, t));
    x = box.clip(x + lr.cwiseProduct(m_hat.cwiseQuotient((v_hat.cwiseSqrt().array() + kEps).matrix())));
  }
  return best;
}

}  // namespace

void MultistartConfig::validate() const {
  if (num_restarts < 1) throw std::invalid_argument("MultistartConfig: num_restarts must be positive");
  if (raw_samples < 0 || max_iters < 0) {
    throw std::invalid_argument("MultistartConfig: raw_samples and max_iters must be non-negative");
  }
  if (static_cast<std::size_t>(num_restarts) > static_cast<std::size_t>(raw_samples) + seed_points.size()) {
    throw std::invalid_argument("MultistartConfig: num_restarts exceeds raw_samples + seed points");
  }
}

double value_and_gradient(const Objective& f, const Box& box, const Vector& x, Vector& gradient) {
  if (f.with_gradient) return f.with_gradient(x, gradient);
  return fd_gradient(f, box, x, gradient);
}

MaximizeResult local_maximize(const Objective& f, const Box& box, const Vector& x0,
                              LocalMethod method, int max_iters) {
  MaximizeResult start{box.clip(x0), f.value(box.clip(x0))};
  if (!std::isfinite(start.value)) start.value = kNegInf;
  MaximizeResult refined = method == LocalMethod::QuasiNewtonBounded
                               ? quasi_newton(f, box, start.x, max_iters)
                               : adam(f, box, start.x, max_iters);
  if (!(refined.value > start.value)) return start;
  return refined;
}

MaximizeResult maximize(const Objective& f, const Box& box, const MultistartConfig& cfg,
                        std::uint64_t seed, Execution exec) {
  cfg.validate();
  const auto d = box.dim();
  std::vector<Vector> starts;
  starts.reserve(static_cast<std::size_t>(cfg.raw_samples) + cfg.seed_points.size());
  if (cfg.raw_samples > 0) {
    const Matrix raw = box.from_unit_rows(sobol_sample(static_cast<int>(d), cfg.raw_samples, seed));
    for (Eigen::Index i = 0; i < raw.rows(); ++i) starts.emplace_back(raw.row(i).transpose());
  }
  for (const auto& p : cfg.seed_points) {
    if (p.size() != d) throw std::invalid_argument("maximize: seed point dimension mismatch");
    starts.push_back(box.clip(p));
  }

  const auto n_starts = static_cast<long>(starts.size());
  std::vector<double> raw_values(starts.size());
  parallel_for(n_starts, exec, [&](long i) {
    const double v = f.value(starts[static_cast<std::size_t>(i)]);
    raw_values[static_cast<std::size_t>(i)] = std::isfinite(v) ? v : kNegInf;
  });

  std::vector<std::size_t> order(starts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw_values[a] > raw_values[b]; });

  const auto n_restarts = std::min<long>(cfg.num_restarts, n_starts);
  std::vector<MaximizeResult> refined(static_cast<std::size_t>(n_restarts));
  parallel_for(n_restarts, exec, [&](long r) {
    const auto idx = order[static_cast<std::size_t>(r)];
    if (!std::isfinite(raw_values[idx])) {
      refined[static_cast<std::size_t>(r)] = {starts[idx], kNegInf};
      return;
    }
    refined[static_cast<std::size_t>(r)] = local_maximize(f, box, starts[idx], cfg.method, cfg.max_iters);
  });

  const MaximizeResult* best = nullptr;
  for (const auto& res : refined) {
    if (!std::isfinite(res.value)) continue;
    if (best == nullptr || res.value > best->value) best = &res;
  }
  if (best == nullptr) throw NumericalError("maximize: every restart produced a non-finite value");
  return *best;
}

}  // namespace cbo::optim
