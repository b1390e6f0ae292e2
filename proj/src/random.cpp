#include "opcalc/random.hpp"

#include <algorithm>

namespace opcalc {

ComplexMatrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(complex_gaussian(dim, dim, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(dim, dim, rng);
  return HermitianOperator::from_matrix(0.5 * (g + g.adjoint()));
}

HermitianOperator random_rank_limited_hermitian(Index dim, Index rank, Rng& rng) {
  const ComplexMatrix q = random_unitary(dim, rng);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(dim);
  for (Index k = 0; k < std::min(rank, dim); ++k) lambda(k) = uniform(rng);
  const ComplexMatrix m = q * lambda.cast<Complex>().asDiagonal() * q.adjoint();
  return HermitianOperator::from_matrix(m);
}

ComplexMatrix random_rank_limited_matrix(Index rows, Index cols, Index rank, Rng& rng) {
  return complex_gaussian(rows, rank, rng) * complex_gaussian(rank, cols, rng);
}

HermitianOperator random_hermitian_with_atoms(Index dim, Index atoms, Rng& rng) {
  const ComplexMatrix q = random_unitary(dim, rng);
  std::uniform_int_distribution<int> level(0, static_cast<int>(std::max<Index>(atoms, 1)) - 1);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  const double offset = shift(rng);
  Eigen::VectorXd lambda(dim);
  for (Index k = 0; k < dim; ++k) lambda(k) = offset + 0.75 * level(rng);
  const ComplexMatrix m = q * lambda.cast<Complex>().asDiagonal() * q.adjoint();
  return HermitianOperator::from_matrix(m);
}

}  // namespace opcalc
