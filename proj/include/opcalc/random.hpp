#pragma once

// Seeded random draws of matrices and operators. Every generator takes the
// engine by reference, so a fixed 64-bit seed reproduces a run exactly.

#include <cstdint>
#include <random>

#include "opcalc/linalg.hpp"

namespace opcalc {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240501;

ComplexMatrix complex_gaussian(Index rows, Index cols, Rng& rng);

// Haar-distributed unitary: Q of a QR factorization with the phases of R's
// diagonal absorbed into Q.
ComplexMatrix random_unitary(Index dim, Rng& rng);

// (G + G*)/2 for complex Gaussian G.
HermitianOperator random_hermitian(Index dim, Rng& rng);

// Q diag(lambda) Q* with `rank` nonzero lambdas uniform in (-1, 1), the rest 0.
HermitianOperator random_rank_limited_hermitian(Index dim, Index rank, Rng& rng);

// Product of dim x rank and rank x dim Gaussian factors.
ComplexMatrix random_rank_limited_matrix(Index rows, Index cols, Index rank, Rng& rng);

// Hermitian with at most `atoms` distinct eigenvalues, drawn from a small
// integer-spaced set so that some values repeat.
HermitianOperator random_hermitian_with_atoms(Index dim, Index atoms, Rng& rng);

}  // namespace opcalc
