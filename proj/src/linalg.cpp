#include "opcalc/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace opcalc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::SvdFailure: return "SvdFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BandAboveNyquist: return "BandAboveNyquist";
    case ErrorCode::NonpositiveArgument: return "NonpositiveArgument";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermitian_tolerance(const ComplexMatrix& m) {
  return 1e-10 * std::max(1.0, max_abs(m));
}

double projection_tolerance(Index dim) { return 1e-8 * static_cast<double>(dim); }

namespace {

void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
}

}  // namespace

HermitianOperator HermitianOperator::from_matrix(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare,
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
  }
  require_finite(m);
  const double deviation = max_abs(m - m.adjoint());
  if (deviation > hermitian_tolerance(m)) {
    throw Error(ErrorCode::NotHermitian, "||M - M*||_max = " + std::to_string(deviation));
  }
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  return HermitianOperator(std::move(sym));
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator hermitian_from_matrix(const ComplexMatrix& m) {
  return HermitianOperator::from_matrix(m);
}

SpectralMeasure::SpectralMeasure(Index dim, std::vector<SpectralAtom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  Index total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].basis.rows() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "atom basis has wrong row count");
    }
    if (i > 0 && !(atoms_[i - 1].eigenvalue < atoms_[i].eigenvalue)) {
      throw Error(ErrorCode::InvalidArgument, "atom eigenvalues must be strictly increasing");
    }
    total += atoms_[i].rank();
  }
  if (total != dim_) throw Error(ErrorCode::DimensionMismatch, "atom ranks do not sum to dim");
}

ComplexMatrix SpectralMeasure::eigenbasis() const {
  ComplexMatrix v(dim_, dim_);
  Index col = 0;
  for (const auto& atom : atoms_) {
    v.middleCols(col, atom.rank()) = atom.basis;
    col += atom.rank();
  }
  return v;
}

std::vector<std::size_t> SpectralMeasure::column_atoms() const {
  std::vector<std::size_t> owner;
  owner.reserve(static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    owner.insert(owner.end(), static_cast<std::size_t>(atoms_[i].rank()), i);
  }
  return owner;
}

ComplexMatrix SpectralMeasure::reconstruct() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& atom : atoms_) sum += atom.eigenvalue * atom.projection();
  return sum;
}

SpectralMeasure spectral_measure(const HermitianOperator& a, double group_tol) {
  if (!(group_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "group_tol must be >= 0");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "self-adjoint eigensolver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const ComplexMatrix& vectors = solver.eigenvectors();
  const Index n = values.size();

  std::vector<SpectralAtom> atoms;
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && values(stop) - values(stop - 1) <= group_tol) ++stop;
    const Index count = stop - start;
    const double mean = values.segment(start, count).mean();
    atoms.push_back(SpectralAtom{mean, vectors.middleCols(start, count)});
    start = stop;
  }
  return SpectralMeasure(n, std::move(atoms));
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return {};
  if (!m.allFinite()) throw Error(ErrorCode::SvdFailure, "matrix has non-finite entries");
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::SvdFailure, "SVD did not converge");
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

SchattenIndex::SchattenIndex(double p) : p_(p), infinite_(false) {
  if (std::isinf(p) && p > 0) {
    infinite_ = true;
    p_ = 0.0;
    return;
  }
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Schatten index must satisfy p >= 1, got " + std::to_string(p));
  }
}

SchattenIndex SchattenIndex::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return infinity();
  double p = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, p);
  if (ec != std::errc() || ptr != last || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidArgument, "not a Schatten index: '" + text + "'");
  }
  return SchattenIndex(p);
}

double SchattenIndex::value() const {
  if (infinite_) throw Error(ErrorCode::InvalidArgument, "p = inf has no finite value");
  return p_;
}

std::string SchattenIndex::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p_);
  (void)ec;
  return std::string(buf, ptr);
}

double SchattenIndex::half_minus_reciprocal() const {
  return infinite_ ? 0.5 : 0.5 - 1.0 / p_;
}

double schatten_norm_from_singular_values(const std::vector<double>& s, SchattenIndex p) {
  if (s.empty() || s.front() == 0.0) return 0.0;
  const double s1 = s.front();
  if (p.is_infinite()) return s1;
  const double cutoff = 1e-14 * s1;
  const double exponent = p.value();
  // Scale by s1 so that s^p cannot overflow or underflow for large p.
  double sum = 0.0;
  for (double v : s) {
    if (v < cutoff) break;
    sum += std::pow(v / s1, exponent);
  }
  return s1 * std::pow(sum, 1.0 / exponent);
}

double schatten_norm(const ComplexMatrix& m, SchattenIndex p) {
  return schatten_norm_from_singular_values(singular_values(m), p);
}

Index numerical_rank(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  const double cutoff = 1e-14 * s.front();
  return static_cast<Index>(std::count_if(s.begin(), s.end(), [&](double v) { return v >= cutoff; }));
}

ComplexMatrix rank_one(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "rank_one: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  return u * v.adjoint();
}

Complex inner(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "inner product size mismatch");
  // Eigen's dot conjugates its first argument.
  return y.dot(x);
}

}  // namespace opcalc
