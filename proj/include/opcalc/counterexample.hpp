#pragma once

// Triples (A, B, C) of Hermitian N x N matrices and a function f = phi (x) psi
// for which f(A, B, C) - f(A, B, 0) = phi(A, B) C has every Schatten norm
// equal to sqrt(N) while ||C||_{S_p} = 1 and the B^1_{inf,1} majorant of f
// stays bounded in N.
//
// Construction (indices 1-based):
//   u_jk    = N^{-1/2} exp(2 pi i jk / N)           (DFT unitary)
//   h_k     = e_k,  (g_j)_k = conj(u_jk)            so (h_k, g_j) = u_jk
//   theta_jk = sqrt(N) conj(u_jk)
//   A = sum 2 pi j (., g_j) g_j,  B = sum 2 pi k (., h_k) h_k
//   C = N^{-1} (., sum h) sum h
//   phi(x, y) = sum theta_jk eta(x - 2 pi j) eta(y - 2 pi k),
//   eta(x)    = 2 (1 - cos x) / x^2.

#include <functional>
#include <vector>

#include "opcalc/besov.hpp"
#include "opcalc/linalg.hpp"
#include "opcalc/moi.hpp"

namespace opcalc::counterexample {

// Below this |x| eta is evaluated from its Taylor polynomial.
inline constexpr double kEtaSwitch = 1e-2;

enum class EtaEvaluation {
  Guarded,    // Taylor polynomial near 0
  Unguarded,  // closed form everywhere; only for fault injection
};

double eta(double x);
double eta_unguarded(double x);

// N x N matrix u_jk = N^{-1/2} exp(2 pi i (jk mod N) / N), j, k = 1..N.
ComplexMatrix dft_unitary(int n);

struct OrthonormalSystems {
  std::vector<ComplexVector> g;
  std::vector<ComplexVector> h;
};

// Orthonormal g_j, h_k with (h_k, g_j) = u_jk. Throws NotUnitary if
// ||U*U - I||_max > 1e-10.
OrthonormalSystems orthonormal_realization(const ComplexMatrix& u);

// phi(x, y) = sum_{j,k=1..N} theta_jk eta(x - 2 pi j) eta(y - 2 pi k).
class PhiSymbol {
 public:
  explicit PhiSymbol(ComplexMatrix theta, EtaEvaluation mode = EtaEvaluation::Guarded);

  int order() const { return static_cast<int>(theta_.rows()); }
  const ComplexMatrix& theta() const { return theta_; }

  Complex operator()(double x, double y) const;
  // Values on the product grid xs x ys: row i, column k is phi(xs[i], ys[k]).
  ComplexMatrix on_grid(const std::vector<double>& xs, const std::vector<double>& ys) const;
  // max |phi| over [0, 2 pi (N+1)]^2 sampled with `per_cell` points per 2 pi.
  double grid_sup(int per_cell = 8) const;

  moi::Symbol2 symbol() const;

 private:
  // Matrix with entries eta(x_i - 2 pi j), j = 1..N.
  Eigen::MatrixXd shifted_eta(const std::vector<double>& xs) const;

  ComplexMatrix theta_;
  EtaEvaluation mode_;
};

PhiSymbol phi_symbol(const ComplexMatrix& theta);

struct InstanceOptions {
  EtaEvaluation eta = EtaEvaluation::Guarded;
};

struct CounterexampleInstance {
  int n;
  ComplexMatrix u;
  ComplexMatrix theta;
  OrthonormalSystems systems;
  HermitianOperator a;
  HermitianOperator b;
  HermitianOperator c;
  PhiSymbol phi;
  // f(x, y, z) = phi(x, y) psi(z)
  moi::Symbol3 f;
};

CounterexampleInstance build_instance(int n, InstanceOptions options = {});

// Group tolerance for spectra of A, B: their eigenvalues are 2 pi apart.
inline constexpr double kLatticeGroupTol = 1e-6;

// phi(A, B) through the double operator integral.
ComplexMatrix phi_of_pair(const CounterexampleInstance& inst);

// f(A, B, Z) through the triple operator integral, phi tabulated on the
// lattice spectra in one matrix product.
ComplexMatrix f_of_triple(const CounterexampleInstance& inst, const HermitianOperator& z);

struct GrowthDifference {
  double eps;
  ComplexMatrix difference;     // f(A, B, eps C) - f(A, B, 0)
  double factorization_error;   // ||difference - eps phi(A, B) C||_max
  double zero_path_error;       // ||f(A, B, 0) - 0||_max (psi(0) = 0)
};

// Throws InvalidEpsilon unless 0 < eps <= 1.
GrowthDifference growth_difference(const CounterexampleInstance& inst, double eps = 1.0);

struct ExperimentRecord {
  int n;
  SchattenIndex p;
  double lhs;              // ||f(A,B,C1) - f(A,B,C2)||_{S_p}
  double perturbation;     // ||C1 - C2||_{S_p}
  double besov_surrogate;  // tensor_bound_kappa(grid sup |phi|, psi)
  double ratio;            // lhs / perturbation
};

ExperimentRecord make_record(const CounterexampleInstance& inst, const GrowthDifference& diff,
                             SchattenIndex p, double besov_surrogate);

// Builds the instance for N, computes the difference and its record. The
// besov surrogate is grid_sup(phi) * psi_majorant.
ExperimentRecord verify_growth(int n, SchattenIndex p, double psi_majorant);

// One record per N with C1 = eps(N) C, C2 = 0.
std::vector<ExperimentRecord> epsilon_scaling_run(const std::vector<int>& ns,
                                                  const std::function<double(int)>& eps_rule,
                                                  SchattenIndex p, double psi_majorant);

}  // namespace opcalc::counterexample
