#pragma once

// Multiple operator integrals for finitely atomic spectral measures.
//
// With atoms a_j, b_k, c_l of E1, E2, E3 the integrals are the finite sums
//
//   sum_{j,k}   Phi(a_j, b_k)      E1({a_j}) T  E2({b_k})
//   sum_{j,k,l} Phi(a_j, b_k, c_l) E1({a_j}) T1 E2({b_k}) T2 E3({c_l})
//
// and functions of (not necessarily commuting) tuples of Hermitian operators
// are the special cases with every T equal to the identity. The sums are
// evaluated in the eigenbases of the measures: the symbol is tabulated once
// per atom tuple and applied as an entrywise (Schur) multiplier.

#include <functional>
#include <vector>

#include "opcalc/linalg.hpp"

namespace opcalc::moi {

using Symbol1 = std::function<Complex(double)>;
using Symbol2 = std::function<Complex(double, double)>;
using Symbol3 = std::function<Complex(double, double, double)>;

// Value assigned to a divided difference on the diagonal x = y.
using DiagonalRule = std::function<Complex(double)>;

DiagonalRule diagonal_zero();
DiagonalRule diagonal_constant(Complex value);

// (f(x) - f(y)) / (x - y) off the diagonal, rule(x) on it.
class DividedDifference {
 public:
  explicit DividedDifference(Symbol1 base, DiagonalRule rule = diagonal_zero());
  Complex operator()(double x, double y) const;

 private:
  Symbol1 base_;
  DiagonalRule rule_;
};

// Symbol values on atom pairs: entry (j, k) = Phi(a_j, b_k).
using AtomTable2 = ComplexMatrix;

// Symbol values on atom triples, (j, k, l) -> Phi(a_j, b_k, c_l).
class AtomTable3 {
 public:
  AtomTable3(std::size_t n1, std::size_t n2, std::size_t n3)
      : n1_(n1), n2_(n2), n3_(n3), values_(n1 * n2 * n3) {}

  std::size_t extent(int axis) const { return axis == 0 ? n1_ : axis == 1 ? n2_ : n3_; }
  Complex& operator()(std::size_t j, std::size_t k, std::size_t l) {
    return values_[(j * n2_ + k) * n3_ + l];
  }
  Complex operator()(std::size_t j, std::size_t k, std::size_t l) const {
    return values_[(j * n2_ + k) * n3_ + l];
  }

 private:
  std::size_t n1_, n2_, n3_;
  std::vector<Complex> values_;
};

// Evaluate a symbol on all atoms, lexicographic in (j, k, l). Throws
// InvalidArgument if a value is not finite.
Eigen::VectorXcd tabulate(const Symbol1& f, const SpectralMeasure& e);
AtomTable2 tabulate(const Symbol2& phi, const SpectralMeasure& e1, const SpectralMeasure& e2);
AtomTable3 tabulate(const Symbol3& phi, const SpectralMeasure& e1, const SpectralMeasure& e2,
                    const SpectralMeasure& e3);

// sum_l f(l) E({l})
ComplexMatrix apply_function_single(const Symbol1& f, const SpectralMeasure& e);

ComplexMatrix double_operator_integral(const Symbol2& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t, const SpectralMeasure& e2);
ComplexMatrix double_operator_integral(const AtomTable2& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t, const SpectralMeasure& e2);

// f(A, B) = sum f(l, m) E_A({l}) E_B({m}).
ComplexMatrix apply_function_pair(const Symbol2& f, const HermitianOperator& a,
                                  const HermitianOperator& b);

ComplexMatrix triple_operator_integral(const Symbol3& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t1, const SpectralMeasure& e2,
                                       const ComplexMatrix& t2, const SpectralMeasure& e3);
ComplexMatrix triple_operator_integral(const AtomTable3& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t1, const SpectralMeasure& e2,
                                       const ComplexMatrix& t2, const SpectralMeasure& e3);

// f(A, B, C) = sum f(l, m, n) E_A({l}) E_B({m}) E_C({n}).
ComplexMatrix apply_function_triple(const Symbol3& f, const HermitianOperator& a,
                                    const HermitianOperator& b, const HermitianOperator& c);
ComplexMatrix apply_function_triple(const Symbol3& f, const SpectralMeasure& ea,
                                    const SpectralMeasure& eb, const SpectralMeasure& ec);

// Double operator integral of the divided difference of f against A - B.
// Equals f(A) - f(B) for any f and any diagonal rule.
ComplexMatrix perturbation_via_divided_difference(const Symbol1& f, const HermitianOperator& a,
                                                  const HermitianOperator& b,
                                                  DiagonalRule rule = diagonal_zero());

// Which argument of a three-variable function is perturbed.
enum class Slot { First, Second, Third };

// Divided-difference expansion of f(..., X1, ...) - f(..., X2, ...) where X1,
// X2 occupy `slot` and (fixed_a, fixed_b) fill the remaining two arguments in
// their natural order. For Slot::First this is
//
//   sum_{l1 != l2, m, n} [f(l1,m,n) - f(l2,m,n)] / (l1 - l2)
//       E_{X1}({l1}) (X1 - X2) E_{X2}({l2}) E_B({m}) E_C({n})
//
// and the other slots move the sandwich to the corresponding position. The
// condition l1 != l2 compares grouped eigenvalues exactly.
ComplexMatrix triple_perturbation(const Symbol3& f, Slot slot, const HermitianOperator& x1,
                                  const HermitianOperator& x2, const HermitianOperator& fixed_a,
                                  const HermitianOperator& fixed_b,
                                  double group_tol = kDefaultGroupTol);

inline ComplexMatrix first_argument_perturbation(const Symbol3& f, const HermitianOperator& a1,
                                                 const HermitianOperator& a2,
                                                 const HermitianOperator& b,
                                                 const HermitianOperator& c) {
  return triple_perturbation(f, Slot::First, a1, a2, b, c);
}

}  // namespace opcalc::moi
