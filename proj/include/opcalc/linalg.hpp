#pragma once

// Dense complex linear algebra used by the operator calculus: Hermitian
// operators, their finite spectral measures, singular values and Schatten
// norms.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opcalc/error.hpp"

namespace opcalc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultGroupTol = 1e-8;

// Largest entry modulus, ||M||_max.
double max_abs(const ComplexMatrix& m);

// Accepted asymmetry for a Hermitian matrix: 1e-10 * max(1, ||M||_max).
double hermitian_tolerance(const ComplexMatrix& m);

// Tolerance for projection identities and spectral reconstruction: 1e-8 * dim.
double projection_tolerance(Index dim);

// A square complex matrix equal to its adjoint. The stored matrix is exactly
// Hermitian: construction symmetrizes (M + M*)/2 after the tolerance check.
class HermitianOperator {
 public:
  static HermitianOperator from_matrix(const ComplexMatrix& m);
  static HermitianOperator zero(Index dim);
  static HermitianOperator identity(Index dim);

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  explicit HermitianOperator(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

HermitianOperator hermitian_from_matrix(const ComplexMatrix& m);

// One atom of a finitely atomic spectral measure. The projection E({eigenvalue})
// is held through an orthonormal basis of its range, so that P = basis * basis^*.
struct SpectralAtom {
  double eigenvalue;
  ComplexMatrix basis;  // dim x rank, orthonormal columns

  Index rank() const { return basis.cols(); }
  ComplexMatrix projection() const { return basis * basis.adjoint(); }
};

// Finitely atomic spectral measure of a Hermitian operator. Atoms are sorted
// by strictly increasing eigenvalue, their projections are mutually orthogonal
// and sum to the identity.
class SpectralMeasure {
 public:
  SpectralMeasure(Index dim, std::vector<SpectralAtom> atoms);

  Index dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }
  const SpectralAtom& atom(std::size_t i) const { return atoms_[i]; }

  // Full unitary eigenbasis, columns grouped atom by atom in atom order.
  ComplexMatrix eigenbasis() const;
  // Atom index owning each column of eigenbasis().
  std::vector<std::size_t> column_atoms() const;
  // Sum of eigenvalue * projection.
  ComplexMatrix reconstruct() const;

 private:
  Index dim_;
  std::vector<SpectralAtom> atoms_;
};

// Eigenvalues closer than group_tol (chained between neighbours in sorted
// order) are merged into one atom carrying the mean eigenvalue.
SpectralMeasure spectral_measure(const HermitianOperator& a, double group_tol = kDefaultGroupTol);

// Descending singular values, min(rows, cols) of them.
std::vector<double> singular_values(const ComplexMatrix& m);

// Index p of the Schatten class S_p, 1 <= p <= inf. Infinity is a separate
// state, never a large double.
class SchattenIndex {
 public:
  explicit SchattenIndex(double p);
  static SchattenIndex infinity() { return SchattenIndex(); }
  // Accepts a decimal number >= 1 or "inf".
  static SchattenIndex parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  // Finite exponent; throws InvalidArgument for p = inf.
  double value() const;
  // "inf" or the shortest round-trip decimal form.
  std::string to_string() const;

  // 1/2 - 1/p, the exponent in rank comparisons between S_2 and S_p.
  double half_minus_reciprocal() const;

  friend bool operator==(const SchattenIndex& a, const SchattenIndex& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }
  friend bool operator<(const SchattenIndex& a, const SchattenIndex& b) {
    if (a.infinite_ || b.infinite_) return !a.infinite_ && b.infinite_;
    return a.p_ < b.p_;
  }

 private:
  SchattenIndex() : p_(0.0), infinite_(true) {}
  double p_;
  bool infinite_;
};

// (sum s_k^p)^(1/p), or s_1 for p = inf. Singular values below 1e-14 * s_1 are
// dropped before exponentiation.
double schatten_norm(const ComplexMatrix& m, SchattenIndex p);
double schatten_norm_from_singular_values(const std::vector<double>& s, SchattenIndex p);

// Number of singular values above 1e-14 * s_1, matching schatten_norm's cutoff.
Index numerical_rank(const ComplexMatrix& m);

// The operator w -> (w, v) u, entries u_i * conj(v_k). The inner product is
// conjugate-linear in the second slot.
ComplexMatrix rank_one(const ComplexVector& u, const ComplexVector& v);

// (x, y) = sum x_i conj(y_i).
Complex inner(const ComplexVector& x, const ComplexVector& y);

}  // namespace opcalc
