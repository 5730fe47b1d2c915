#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "tracelab/matrix_core.hpp"

namespace tracelab {

using Rng = std::mt19937_64;

/// Independent generator for trial `stream` of a run seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t stream);

/// Entries (g₁ + i·g₂)/√2 with g₁, g₂ standard normal.
ComplexMatrix random_gaussian(std::size_t dim, Rng& rng);
/// Haar unitary via QR of a Gaussian matrix with the phases of R removed.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
/// U·diag(g)·U* with Gaussian eigenvalues g.
ComplexMatrix random_normal(std::size_t dim, Rng& rng);
/// Keeps the `rank` largest singular values of m and zeroes the rest.
ComplexMatrix truncate_rank(const ComplexMatrix& m, std::size_t rank);

}  // namespace tracelab
