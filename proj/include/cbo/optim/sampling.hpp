#pragma once

#include <cstdint>

#include "cbo/common.hpp"
#include "cbo/optim/box.hpp"

namespace cbo::optim {

/// Latin hypercube design: every coordinate has exactly one point in each of the n
/// equal-width strata of the box. Deterministic under `seed`.
Matrix lhs_sample(const Box& box, int n, std::uint64_t seed);

/// Sobol points in [0,1)^dim (Joe-Kuo direction numbers, origin skipped). When
/// `scramble` is set, every dimension is XOR-shifted by a seed-derived 32-bit mask.
Matrix sobol_sample(int dim, int n, std::uint64_t seed, bool scramble = true);

}  // namespace cbo::optim
