#include "opcalc/moi.hpp"

#include <cmath>
#include <string>

namespace opcalc::moi {

namespace {

Complex checked(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorCode::InvalidArgument, "symbol returned a non-finite value");
  }
  return v;
}

void require_dims(Index expected, Index got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(got));
  }
}

void require_square(const ComplexMatrix& t, Index dim, const char* what) {
  if (t.rows() != dim || t.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be " +
                                                  std::to_string(dim) + "x" + std::to_string(dim));
  }
}

// Four-measure chain sum_{w,x,y,z} D(w,x,y,z) E1 T1 E2 T2 E3 T3 E4, evaluated in
// eigenbases. `d` maps atom indices to the symbol value.
template <typename Table>
ComplexMatrix chain4(const Table& d, const SpectralMeasure& e1, const ComplexMatrix& t1,
                     const SpectralMeasure& e2, const ComplexMatrix& t2, const SpectralMeasure& e3,
                     const ComplexMatrix& t3, const SpectralMeasure& e4) {
  const Index n = e1.dim();
  const ComplexMatrix v1 = e1.eigenbasis();
  const ComplexMatrix v2 = e2.eigenbasis();
  const ComplexMatrix v3 = e3.eigenbasis();
  const ComplexMatrix v4 = e4.eigenbasis();
  const ComplexMatrix x = v1.adjoint() * t1 * v2;
  const ComplexMatrix y = v2.adjoint() * t2 * v3;
  const ComplexMatrix z = v3.adjoint() * t3 * v4;
  const auto o1 = e1.column_atoms();
  const auto o2 = e2.column_atoms();
  const auto o3 = e3.column_atoms();
  const auto o4 = e4.column_atoms();

  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Index u = 0; u < n; ++u) {
    for (Index t = 0; t < n; ++t) {
      const Complex zt = z(t, u);
      for (Index s = 0; s < n; ++s) {
        const Complex yz = y(s, t) * zt;
        if (yz == Complex(0.0)) continue;
        for (Index i = 0; i < n; ++i) {
          m(i, u) += d(o1[i], o2[s], o3[t], o4[u]) * x(i, s) * yz;
        }
      }
    }
  }
  return v1 * m * v4.adjoint();
}

}  // namespace

DiagonalRule diagonal_zero() {
  return [](double) { return Complex(0.0); };
}

DiagonalRule diagonal_constant(Complex value) {
  return [value](double) { return value; };
}

DividedDifference::DividedDifference(Symbol1 base, DiagonalRule rule)
    : base_(std::move(base)), rule_(std::move(rule)) {}

Complex DividedDifference::operator()(double x, double y) const {
  if (x == y) return rule_(x);
  return (base_(x) - base_(y)) / (x - y);
}

Eigen::VectorXcd tabulate(const Symbol1& f, const SpectralMeasure& e) {
  Eigen::VectorXcd out(static_cast<Index>(e.size()));
  for (std::size_t j = 0; j < e.size(); ++j) {
    out(static_cast<Index>(j)) = checked(f(e.atom(j).eigenvalue));
  }
  return out;
}

AtomTable2 tabulate(const Symbol2& phi, const SpectralMeasure& e1, const SpectralMeasure& e2) {
  AtomTable2 out(static_cast<Index>(e1.size()), static_cast<Index>(e2.size()));
  for (std::size_t j = 0; j < e1.size(); ++j) {
    for (std::size_t k = 0; k < e2.size(); ++k) {
      out(static_cast<Index>(j), static_cast<Index>(k)) =
          checked(phi(e1.atom(j).eigenvalue, e2.atom(k).eigenvalue));
    }
  }
  return out;
}

AtomTable3 tabulate(const Symbol3& phi, const SpectralMeasure& e1, const SpectralMeasure& e2,
                    const SpectralMeasure& e3) {
  AtomTable3 out(e1.size(), e2.size(), e3.size());
  for (std::size_t j = 0; j < e1.size(); ++j) {
    for (std::size_t k = 0; k < e2.size(); ++k) {
      for (std::size_t l = 0; l < e3.size(); ++l) {
        out(j, k, l) =
            checked(phi(e1.atom(j).eigenvalue, e2.atom(k).eigenvalue, e3.atom(l).eigenvalue));
      }
    }
  }
  return out;
}

ComplexMatrix apply_function_single(const Symbol1& f, const SpectralMeasure& e) {
  const Eigen::VectorXcd values = tabulate(f, e);
  const ComplexMatrix v = e.eigenbasis();
  const auto owner = e.column_atoms();
  Eigen::VectorXcd diag(e.dim());
  for (Index i = 0; i < e.dim(); ++i) diag(i) = values(static_cast<Index>(owner[i]));
  return v * diag.asDiagonal() * v.adjoint();
}

ComplexMatrix double_operator_integral(const AtomTable2& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t, const SpectralMeasure& e2) {
  require_dims(e1.dim(), e2.dim(), "double_operator_integral");
  require_square(t, e1.dim(), "T");
  if (phi.rows() != static_cast<Index>(e1.size()) || phi.cols() != static_cast<Index>(e2.size())) {
    throw Error(ErrorCode::DimensionMismatch, "atom table does not match the measures");
  }
  const ComplexMatrix v1 = e1.eigenbasis();
  const ComplexMatrix v2 = e2.eigenbasis();
  const auto o1 = e1.column_atoms();
  const auto o2 = e2.column_atoms();
  ComplexMatrix m = v1.adjoint() * t * v2;
  for (Index s = 0; s < m.cols(); ++s) {
    for (Index i = 0; i < m.rows(); ++i) {
      m(i, s) *= phi(static_cast<Index>(o1[i]), static_cast<Index>(o2[s]));
    }
  }
  return v1 * m * v2.adjoint();
}

ComplexMatrix double_operator_integral(const Symbol2& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t, const SpectralMeasure& e2) {
  require_dims(e1.dim(), e2.dim(), "double_operator_integral");
  require_square(t, e1.dim(), "T");
  return double_operator_integral(tabulate(phi, e1, e2), e1, t, e2);
}

ComplexMatrix apply_function_pair(const Symbol2& f, const HermitianOperator& a,
                                  const HermitianOperator& b) {
  require_dims(a.dim(), b.dim(), "apply_function_pair");
  const auto ea = spectral_measure(a);
  const auto eb = spectral_measure(b);
  return double_operator_integral(f, ea, ComplexMatrix::Identity(a.dim(), a.dim()), eb);
}

ComplexMatrix triple_operator_integral(const AtomTable3& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t1, const SpectralMeasure& e2,
                                       const ComplexMatrix& t2, const SpectralMeasure& e3) {
  require_dims(e1.dim(), e2.dim(), "triple_operator_integral");
  require_dims(e1.dim(), e3.dim(), "triple_operator_integral");
  require_square(t1, e1.dim(), "T1");
  require_square(t2, e1.dim(), "T2");
  if (phi.extent(0) != e1.size() || phi.extent(1) != e2.size() || phi.extent(2) != e3.size()) {
    throw Error(ErrorCode::DimensionMismatch, "atom table does not match the measures");
  }
  const Index n = e1.dim();
  const ComplexMatrix v1 = e1.eigenbasis();
  const ComplexMatrix v2 = e2.eigenbasis();
  const ComplexMatrix v3 = e3.eigenbasis();
  const ComplexMatrix x = v1.adjoint() * t1 * v2;
  const ComplexMatrix y = v2.adjoint() * t2 * v3;
  const auto o1 = e1.column_atoms();
  const auto o2 = e2.column_atoms();
  const auto o3 = e3.column_atoms();

  // m(i, u) = sum_s phi(a(i), b(s), c(u)) x(i, s) y(s, u)
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Eigen::VectorXcd weights(n);
  for (Index u = 0; u < n; ++u) {
    for (Index s = 0; s < n; ++s) {
      const Complex ysu = y(s, u);
      if (ysu == Complex(0.0)) continue;
      for (Index i = 0; i < n; ++i) weights(i) = phi(o1[i], o2[s], o3[u]);
      m.col(u).noalias() += (weights.array() * x.col(s).array()).matrix() * ysu;
    }
  }
  return v1 * m * v3.adjoint();
}

ComplexMatrix triple_operator_integral(const Symbol3& phi, const SpectralMeasure& e1,
                                       const ComplexMatrix& t1, const SpectralMeasure& e2,
                                       const ComplexMatrix& t2, const SpectralMeasure& e3) {
  require_dims(e1.dim(), e2.dim(), "triple_operator_integral");
  require_dims(e1.dim(), e3.dim(), "triple_operator_integral");
  return triple_operator_integral(tabulate(phi, e1, e2, e3), e1, t1, e2, t2, e3);
}

ComplexMatrix apply_function_triple(const Symbol3& f, const SpectralMeasure& ea,
                                    const SpectralMeasure& eb, const SpectralMeasure& ec) {
  const ComplexMatrix id = ComplexMatrix::Identity(ea.dim(), ea.dim());
  return triple_operator_integral(f, ea, id, eb, id, ec);
}

ComplexMatrix apply_function_triple(const Symbol3& f, const HermitianOperator& a,
                                    const HermitianOperator& b, const HermitianOperator& c) {
  require_dims(a.dim(), b.dim(), "apply_function_triple");
  require_dims(a.dim(), c.dim(), "apply_function_triple");
  return apply_function_triple(f, spectral_measure(a), spectral_measure(b), spectral_measure(c));
}

ComplexMatrix perturbation_via_divided_difference(const Symbol1& f, const HermitianOperator& a,
                                                  const HermitianOperator& b, DiagonalRule rule) {
  require_dims(a.dim(), b.dim(), "perturbation_via_divided_difference");
  const DividedDifference dd(f, std::move(rule));
  const Symbol2 phi = [&dd](double x, double y) { return dd(x, y); };
  return double_operator_integral(phi, spectral_measure(a), a.matrix() - b.matrix(),
                                  spectral_measure(b));
}

ComplexMatrix triple_perturbation(const Symbol3& f, Slot slot, const HermitianOperator& x1,
                                  const HermitianOperator& x2, const HermitianOperator& fixed_a,
                                  const HermitianOperator& fixed_b, double group_tol) {
  const Index n = x1.dim();
  require_dims(n, x2.dim(), "triple_perturbation");
  require_dims(n, fixed_a.dim(), "triple_perturbation");
  require_dims(n, fixed_b.dim(), "triple_perturbation");

  const SpectralMeasure e1 = spectral_measure(x1, group_tol);
  const SpectralMeasure e2 = spectral_measure(x2, group_tol);
  const SpectralMeasure ea = spectral_measure(fixed_a, group_tol);
  const SpectralMeasure eb = spectral_measure(fixed_b, group_tol);
  const ComplexMatrix delta = x1.matrix() - x2.matrix();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  // Place (l, p, q) -> argument list of f according to the slot: l is the
  // perturbed variable, p and q the fixed ones in order.
  auto eval = [&](double l, double p, double q) {
    switch (slot) {
      case Slot::First: return f(l, p, q);
      case Slot::Second: return f(p, l, q);
      case Slot::Third: return f(p, q, l);
    }
    return Complex(0.0);
  };

  const std::size_t n1 = e1.size(), n2 = e2.size(), na = ea.size(), nb = eb.size();
  // f over (perturbed atom, fixed_a atom, fixed_b atom) for both sides.
  AtomTable3 f1(n1, na, nb), f2(n2, na, nb);
  for (std::size_t p = 0; p < na; ++p) {
    for (std::size_t q = 0; q < nb; ++q) {
      const double vp = ea.atom(p).eigenvalue, vq = eb.atom(q).eigenvalue;
      for (std::size_t j = 0; j < n1; ++j) f1(j, p, q) = checked(eval(e1.atom(j).eigenvalue, vp, vq));
      for (std::size_t j = 0; j < n2; ++j) f2(j, p, q) = checked(eval(e2.atom(j).eigenvalue, vp, vq));
    }
  }
  auto divided = [&](std::size_t j1, std::size_t j2, std::size_t p, std::size_t q) {
    const double l1 = e1.atom(j1).eigenvalue, l2 = e2.atom(j2).eigenvalue;
    if (l1 == l2) return Complex(0.0);
    return (f1(j1, p, q) - f2(j2, p, q)) / (l1 - l2);
  };

  switch (slot) {
    case Slot::First:
      // E_{X1} (X1 - X2) E_{X2} I E_A I E_B
      return chain4([&](std::size_t w, std::size_t x, std::size_t y, std::size_t z) {
                      return divided(w, x, y, z);
                    },
                    e1, delta, e2, id, ea, id, eb);
    case Slot::Second:
      // E_A I E_{X1} (X1 - X2) E_{X2} I E_B
      return chain4([&](std::size_t w, std::size_t x, std::size_t y, std::size_t z) {
                      return divided(x, y, w, z);
                    },
                    ea, id, e1, delta, e2, id, eb);
    case Slot::Third:
      // E_A I E_B I E_{X1} (X1 - X2) E_{X2}
      return chain4([&](std::size_t w, std::size_t x, std::size_t y, std::size_t z) {
                      return divided(y, z, w, x);
                    },
                    ea, id, eb, id, e1, delta, e2);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown slot");
}

}  // namespace opcalc::moi
