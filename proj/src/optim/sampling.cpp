#include "cbo/optim/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/random/sobol.hpp>

namespace cbo::optim {

Matrix lhs_sample(const Box& box, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("lhs_sample: n must be positive");
  const auto d = box.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix unit(n, d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) {
      unit(i, j) = (perm[static_cast<std::size_t>(i)] + unif(rng)) / n;
    }
  }
  return box.from_unit_rows(unit);
}

Matrix sobol_sample(int dim, int n, std::uint64_t seed, bool scramble) {
  if (dim < 1 || n < 1) throw std::invalid_argument("sobol_sample: dim and n must be positive");
  boost::random::sobol_engine<std::uint32_t, 32> engine(static_cast<std::size_t>(dim));
  std::vector<std::uint32_t> shift(static_cast<std::size_t>(dim), 0u);
  if (scramble) {
    std::mt19937_64 rng(seed);
    for (auto& s : shift) s = static_cast<std::uint32_t>(rng() >> 32);
  }
  constexpr double kScale = 1.0 / 4294967296.0;
  Matrix out(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) {
      out(i, j) = static_cast<double>(engine() ^ shift[static_cast<std::size_t>(j)]) * kScale;
    }
  }
  return out;
}

}  // namespace cbo::optim
