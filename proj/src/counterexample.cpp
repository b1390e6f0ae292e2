#include "opcalc/counterexample.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace opcalc::counterexample {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double eta_with(EtaEvaluation mode, double x) {
  return mode == EtaEvaluation::Guarded ? eta(x) : eta_unguarded(x);
}

void require_order(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1, got " + std::to_string(n));
}

}  // namespace

double eta(double x) {
  const double ax = std::abs(x);
  if (ax <= kEtaSwitch) {
    const double x2 = x * x;
    return 1.0 - x2 / 12.0 + x2 * x2 / 360.0 - x2 * x2 * x2 / 20160.0;
  }
  // 2 (1 - cos x) / x^2 = (sin(x/2) / (x/2))^2 without the cancellation in 1 - cos x.
  const double s = std::sin(0.5 * x) / (0.5 * x);
  return s * s;
}

double eta_unguarded(double x) { return 2.0 * (1.0 - std::cos(x)) / (x * x); }

ComplexMatrix dft_unitary(int n) {
  require_order(n);
  ComplexMatrix u(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      const long long r = (static_cast<long long>(j) * k) % n;
      const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
      u(j - 1, k - 1) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return u;
}

OrthonormalSystems orthonormal_realization(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw Error(ErrorCode::NotSquare, "U must be square");
  const Index n = u.rows();
  const double defect = max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n));
  if (defect > 1e-10) throw Error(ErrorCode::NotUnitary, "||U*U - I||_max = " + std::to_string(defect));
  OrthonormalSystems out;
  for (Index j = 0; j < n; ++j) {
    out.g.push_back(u.row(j).conjugate().transpose());
    out.h.push_back(ComplexVector::Unit(n, j));
  }
  return out;
}

PhiSymbol::PhiSymbol(ComplexMatrix theta, EtaEvaluation mode) : theta_(std::move(theta)), mode_(mode) {
  if (theta_.rows() != theta_.cols() || theta_.rows() == 0) {
    throw Error(ErrorCode::NotSquare, "theta must be a nonempty square matrix");
  }
}

Eigen::MatrixXd PhiSymbol::shifted_eta(const std::vector<double>& xs) const {
  const int n = order();
  Eigen::MatrixXd out(static_cast<Index>(xs.size()), n);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (int j = 1; j <= n; ++j) out(static_cast<Index>(i), j - 1) = eta_with(mode_, xs[i] - kTwoPi * j);
  }
  return out;
}

Complex PhiSymbol::operator()(double x, double y) const {
  const Eigen::MatrixXd ex = shifted_eta({x});
  const Eigen::MatrixXd ey = shifted_eta({y});
  return (ex.cast<Complex>() * theta_ * ey.cast<Complex>().transpose())(0, 0);
}

ComplexMatrix PhiSymbol::on_grid(const std::vector<double>& xs, const std::vector<double>& ys) const {
  return shifted_eta(xs).cast<Complex>() * theta_ * shifted_eta(ys).cast<Complex>().transpose();
}

double PhiSymbol::grid_sup(int per_cell) const {
  if (per_cell < 1) throw Error(ErrorCode::InvalidArgument, "per_cell must be >= 1");
  const int count = per_cell * (order() + 1) + 1;
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts[static_cast<std::size_t>(i)] = kTwoPi * i / per_cell;
  return on_grid(pts, pts).cwiseAbs().maxCoeff();
}

moi::Symbol2 PhiSymbol::symbol() const {
  return [self = *this](double x, double y) { return self(x, y); };
}

PhiSymbol phi_symbol(const ComplexMatrix& theta) { return PhiSymbol(theta); }

CounterexampleInstance build_instance(int n, InstanceOptions options) {
  require_order(n);
  ComplexMatrix u = dft_unitary(n);
  OrthonormalSystems systems = orthonormal_realization(u);
  const ComplexMatrix theta = std::sqrt(static_cast<double>(n)) * u.conjugate();

  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  ComplexVector h_sum = ComplexVector::Zero(n);
  for (int j = 1; j <= n; ++j) {
    const auto& g = systems.g[static_cast<std::size_t>(j - 1)];
    const auto& h = systems.h[static_cast<std::size_t>(j - 1)];
    a += (kTwoPi * j) * rank_one(g, g);
    b += (kTwoPi * j) * rank_one(h, h);
    h_sum += h;
  }
  const ComplexMatrix c = rank_one(h_sum, h_sum) / static_cast<double>(n);

  PhiSymbol phi(theta, options.eta);
  moi::Symbol3 f = [phi](double x, double y, double z) { return phi(x, y) * besov::psi_reference(z); };
  return CounterexampleInstance{n,
                                std::move(u),
                                theta,
                                std::move(systems),
                                HermitianOperator::from_matrix(a),
                                HermitianOperator::from_matrix(b),
                                HermitianOperator::from_matrix(c),
                                std::move(phi),
                                std::move(f)};
}

namespace {

std::vector<double> eigenvalues_of(const SpectralMeasure& e) {
  std::vector<double> out;
  for (const auto& atom : e.atoms()) out.push_back(atom.eigenvalue);
  return out;
}

}  // namespace

ComplexMatrix phi_of_pair(const CounterexampleInstance& inst) {
  const auto ea = spectral_measure(inst.a, kLatticeGroupTol);
  const auto eb = spectral_measure(inst.b, kLatticeGroupTol);
  const moi::AtomTable2 table = inst.phi.on_grid(eigenvalues_of(ea), eigenvalues_of(eb));
  return moi::double_operator_integral(table, ea, ComplexMatrix::Identity(inst.n, inst.n), eb);
}

ComplexMatrix f_of_triple(const CounterexampleInstance& inst, const HermitianOperator& z) {
  const auto ea = spectral_measure(inst.a, kLatticeGroupTol);
  const auto eb = spectral_measure(inst.b, kLatticeGroupTol);
  const auto ez = spectral_measure(z);
  const moi::AtomTable2 phi = inst.phi.on_grid(eigenvalues_of(ea), eigenvalues_of(eb));
  moi::AtomTable3 table(ea.size(), eb.size(), ez.size());
  for (std::size_t l = 0; l < ez.size(); ++l) {
    const double psi = besov::psi_reference(ez.atom(l).eigenvalue);
    for (std::size_t j = 0; j < ea.size(); ++j) {
      for (std::size_t k = 0; k < eb.size(); ++k) {
        table(j, k, l) = phi(static_cast<Index>(j), static_cast<Index>(k)) * psi;
      }
    }
  }
  const ComplexMatrix id = ComplexMatrix::Identity(inst.n, inst.n);
  return moi::triple_operator_integral(table, ea, id, eb, id, ez);
}

GrowthDifference growth_difference(const CounterexampleInstance& inst, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1], got " + std::to_string(eps));
  }
  const HermitianOperator scaled = HermitianOperator::from_matrix(eps * inst.c.matrix());
  const ComplexMatrix upper = f_of_triple(inst, scaled);
  const ComplexMatrix lower = f_of_triple(inst, HermitianOperator::zero(inst.n));
  ComplexMatrix diff = upper - lower;
  const ComplexMatrix expected = eps * phi_of_pair(inst) * inst.c.matrix();
  return GrowthDifference{eps, diff, max_abs(diff - expected), max_abs(lower)};
}

ExperimentRecord make_record(const CounterexampleInstance& inst, const GrowthDifference& diff,
                             SchattenIndex p, double besov_surrogate) {
  const double lhs = schatten_norm(diff.difference, p);
  const double perturbation = schatten_norm(diff.eps * inst.c.matrix(), p);
  return ExperimentRecord{inst.n, p, lhs, perturbation, besov_surrogate, lhs / perturbation};
}

ExperimentRecord verify_growth(int n, SchattenIndex p, double psi_majorant) {
  const auto inst = build_instance(n);
  const auto diff = growth_difference(inst);
  return make_record(inst, diff, p, inst.phi.grid_sup() * psi_majorant);
}

std::vector<ExperimentRecord> epsilon_scaling_run(const std::vector<int>& ns,
                                                  const std::function<double(int)>& eps_rule,
                                                  SchattenIndex p, double psi_majorant) {
  std::vector<ExperimentRecord> out;
  for (int n : ns) {
    const double eps = eps_rule(n);
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw Error(ErrorCode::InvalidEpsilon,
                  "epsilon rule gave " + std::to_string(eps) + " for N = " + std::to_string(n));
    }
    const auto inst = build_instance(n);
    const auto diff = growth_difference(inst, eps);
    out.push_back(make_record(inst, diff, p, inst.phi.grid_sup() * psi_majorant));
  }
  return out;
}

}  // namespace opcalc::counterexample
