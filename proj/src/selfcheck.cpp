#include "opcalc/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "opcalc/besov.hpp"
#include "opcalc/bounds.hpp"
#include "opcalc/moi.hpp"

namespace opcalc::selfcheck {

namespace {

using counterexample::build_instance;
using counterexample::InstanceOptions;

std::string fmt(const char* label, double value) {
  std::ostringstream os;
  os << label << "=" << value;
  return os.str();
}

class Collector {
 public:
  void add(std::string module, std::string name, bool passed, std::string detail,
           Severity severity = Severity::Hard) {
    results_.push_back(CheckResult{std::move(module), std::move(name), passed, severity, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

// Random dimension in [1, max_dim].
Index draw_dim(Rng& rng, Index max_dim) {
  std::uniform_int_distribution<Index> d(1, max_dim);
  return d(rng);
}

HermitianOperator scaled_hermitian(Index dim, Rng& rng) {
  const auto h = random_hermitian(dim, rng);
  return HermitianOperator::from_matrix(h.matrix() / std::sqrt(static_cast<double>(dim)));
}

moi::Symbol1 random_polynomial(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> deg(0, 4);
  std::vector<double> c(static_cast<std::size_t>(deg(rng) + 1));
  for (double& v : c) v = normal(rng);
  return [c](double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return Complex(acc);
  };
}

void linalg_checks(Collector& out, Rng& rng) {
  double recon = 0.0, algebra = 0.0, unitary = 0.0, frob = 0.0;
  bool monotone = true, rank_chain = true;
  const std::vector<SchattenIndex> ps{SchattenIndex(1.0), SchattenIndex(1.5), SchattenIndex(2.0),
                                      SchattenIndex(3.0), SchattenIndex(4.0), SchattenIndex::infinity()};
  for (int trial = 0; trial < 50; ++trial) {
    const Index dim = draw_dim(rng, 16);
    const auto a = random_hermitian_with_atoms(dim, 1 + trial % 5, rng);
    const auto e = spectral_measure(a);
    recon = std::max(recon, max_abs(e.reconstruct() - a.matrix()));
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const ComplexMatrix pi = e.atom(i).projection();
      sum += pi;
      for (std::size_t j = 0; j < e.size(); ++j) {
        const ComplexMatrix expected = i == j ? pi : ComplexMatrix::Zero(dim, dim);
        algebra = std::max(algebra, max_abs(pi * e.atom(j).projection() - expected));
      }
    }
    algebra = std::max(algebra, max_abs(sum - ComplexMatrix::Identity(dim, dim)));

    const ComplexMatrix m = complex_gaussian(dim, dim, rng);
    std::vector<double> norms;
    for (auto p : ps) norms.push_back(schatten_norm(m, p));
    for (std::size_t i = 1; i < norms.size(); ++i) monotone = monotone && norms[i] <= norms[i - 1] + 1e-12;

    const ComplexMatrix u = random_unitary(dim, rng), v = random_unitary(dim, rng);
    for (auto p : ps) unitary = std::max(unitary, std::abs(schatten_norm(u * m * v, p) - schatten_norm(m, p)));
    frob = std::max(frob, std::abs(std::pow(schatten_norm(m, SchattenIndex(2.0)), 2) - m.squaredNorm()));

    const Index r = draw_dim(rng, dim);
    const ComplexMatrix low = random_rank_limited_matrix(dim, dim, r, rng);
    for (auto p : {SchattenIndex(2.0), SchattenIndex(3.0), SchattenIndex(4.0), SchattenIndex::infinity()}) {
      const double bound = std::pow(static_cast<double>(r), p.half_minus_reciprocal()) * schatten_norm(low, p);
      rank_chain = rank_chain && schatten_norm(low, SchattenIndex(2.0)) <= bound + 1e-12;
    }
  }
  out.add("linalg", "spectral resolution", recon <= 1e-10, fmt("max_err", recon));
  out.add("linalg", "projection algebra", algebra <= 1e-10, fmt("max_err", algebra));
  out.add("linalg", "schatten monotonicity", monotone, "p in {1,1.5,2,3,4,inf}");
  out.add("linalg", "unitary invariance", unitary <= 1e-10, fmt("max_err", unitary));
  out.add("linalg", "frobenius identity", frob <= 1e-10, fmt("max_err", frob));
  out.add("linalg", "finite-rank S2/Sp inequality", rank_chain, "p in {2,3,4,inf}");
}

void moi_checks(Collector& out, Rng& rng) {
  // Resolution collapse.
  double collapse = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index dim = draw_dim(rng, 8);
    const auto e1 = spectral_measure(random_hermitian(dim, rng));
    const auto e2 = spectral_measure(random_hermitian(dim, rng));
    const ComplexMatrix t = complex_gaussian(dim, dim, rng);
    const moi::Symbol2 phi = [](double x, double) { return std::exp(Complex(0.0, x)) + x * x; };
    const moi::Symbol1 phi1 = [](double x) { return std::exp(Complex(0.0, x)) + x * x; };
    collapse = std::max(collapse, max_abs(moi::double_operator_integral(phi, e1, t, e2) -
                                          moi::apply_function_single(phi1, e1) * t));
  }
  out.add("moi", "resolution collapse", collapse <= 1e-10, fmt("max_err", collapse));

  // Diagonal independence on pairs sharing exact eigenvalues.
  double diag = 0.0;
  int diagonal_hits = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index block = 3;
    ComplexMatrix a = ComplexMatrix::Zero(block + 3, block + 3);
    ComplexMatrix b = a;
    a.topLeftCorner(3, 3).diagonal() << 1.0, 2.0, 3.0;
    b.topLeftCorner(3, 3).diagonal() << 2.0, 3.0, 4.0;
    a.bottomRightCorner(block, block) = random_hermitian(block, rng).matrix();
    b.bottomRightCorner(block, block) = random_hermitian(block, rng).matrix();
    const auto ha = HermitianOperator::from_matrix(a), hb = HermitianOperator::from_matrix(b);
    const moi::Symbol1 f = [](double t) { return Complex(t * t * t - t); };
    const moi::DiagonalRule counting = [&diagonal_hits](double) {
      ++diagonal_hits;
      return Complex(123.0, -7.0);
    };
    diag = std::max(diag, max_abs(moi::perturbation_via_divided_difference(f, ha, hb) -
                                  moi::perturbation_via_divided_difference(f, ha, hb, counting)));
  }
  out.add("moi", "diagonal independence", diag <= 1e-12 && diagonal_hits > 0,
          fmt("max_err", diag) + " diagonal_hits=" + std::to_string(diagonal_hits));

  // Perturbation formula for single operators.
  double pert = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = draw_dim(rng, 10);
    const auto a = scaled_hermitian(dim, rng), b = scaled_hermitian(dim, rng);
    const moi::Symbol1 f = trial % 2 == 0 ? random_polynomial(rng)
                                          : moi::Symbol1([](double t) { return std::exp(Complex(0.0, t)); });
    const ComplexMatrix lhs = moi::perturbation_via_divided_difference(f, a, b);
    const ComplexMatrix rhs =
        moi::apply_function_single(f, spectral_measure(a)) - moi::apply_function_single(f, spectral_measure(b));
    pert = std::max(pert, max_abs(lhs - rhs));
  }
  out.add("moi", "divided-difference perturbation exactness", pert <= 1e-9, fmt("max_err", pert));

  // Triple perturbation formula, all slots.
  double triple = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = draw_dim(rng, 10);
    const auto x1 = scaled_hermitian(dim, rng), x2 = scaled_hermitian(dim, rng);
    const auto p = scaled_hermitian(dim, rng), q = scaled_hermitian(dim, rng);
    const moi::Symbol3 f = trial % 2 == 0
                               ? moi::Symbol3([](double x, double y, double z) { return Complex(x * x * y - z * y + x); })
                               : moi::Symbol3([](double x, double y, double z) {
                                   return std::exp(Complex(0.0, x + 2.0 * y - z));
                                 });
    const auto slot = static_cast<moi::Slot>(trial % 3);
    const ComplexMatrix lhs = moi::triple_perturbation(f, slot, x1, x2, p, q);
    ComplexMatrix rhs;
    switch (slot) {
      case moi::Slot::First:
        rhs = moi::apply_function_triple(f, x1, p, q) - moi::apply_function_triple(f, x2, p, q);
        break;
      case moi::Slot::Second:
        rhs = moi::apply_function_triple(f, p, x1, q) - moi::apply_function_triple(f, p, x2, q);
        break;
      case moi::Slot::Third:
        rhs = moi::apply_function_triple(f, p, q, x1) - moi::apply_function_triple(f, p, q, x2);
        break;
    }
    triple = std::max(triple, max_abs(lhs - rhs));
  }
  out.add("moi", "triple perturbation exactness", triple <= 1e-9, fmt("max_err", triple));

  // Commuting consistency.
  double commuting = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index dim = draw_dim(rng, 8);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd da(dim), db(dim), dc(dim);
    for (Index i = 0; i < dim; ++i) {
      da(i) = normal(rng);
      db(i) = normal(rng);
      dc(i) = normal(rng);
    }
    const moi::Symbol3 f = [](double x, double y, double z) { return Complex(std::sin(x) * y, z * x); };
    const ComplexMatrix r = moi::apply_function_triple(
        f, HermitianOperator::from_matrix(da.cast<Complex>().asDiagonal().toDenseMatrix()),
        HermitianOperator::from_matrix(db.cast<Complex>().asDiagonal().toDenseMatrix()),
        HermitianOperator::from_matrix(dc.cast<Complex>().asDiagonal().toDenseMatrix()));
    ComplexMatrix expected = ComplexMatrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) expected(i, i) = f(da(i), db(i), dc(i));
    commuting = std::max(commuting, max_abs(r - expected));
  }
  out.add("moi", "commuting consistency", commuting <= 1e-12, fmt("max_err", commuting));

  // Brute-force equivalence.
  double brute = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index dim = draw_dim(rng, 6);
    const auto e1 = spectral_measure(random_hermitian_with_atoms(dim, 5, rng));
    const auto e2 = spectral_measure(random_hermitian_with_atoms(dim, 5, rng));
    const auto e3 = spectral_measure(random_hermitian_with_atoms(dim, 5, rng));
    const ComplexMatrix t1 = complex_gaussian(dim, dim, rng), t2 = complex_gaussian(dim, dim, rng);
    const moi::Symbol3 phi = [](double x, double y, double z) { return Complex(std::cos(x * y), z - x); };
    brute = std::max(brute, max_abs(moi::triple_operator_integral(phi, e1, t1, e2, t2, e3) -
                                    naive_triple_integral(phi, e1, t1, e2, t2, e3)));
  }
  out.add("moi", "brute-force triple equivalence", brute <= 1e-10, fmt("max_err", brute));
}

void besov_checks(Collector& out, const Options& opt) {
  double functional = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double s = 1.0 + i / 10000.0;
    functional = std::max(functional, std::abs(besov::window_w(s) - 1.0 + besov::window_w(0.5 * s)));
  }
  out.add("besov", "window functional equation", functional <= 1e-12, fmt("max_err", functional));

  double partition = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = std::exp2(-10.0 + 20.0 * i / 999.0);
    partition = std::max(partition, std::abs(besov::partition_check(s) - 1.0));
  }
  out.add("besov", "partition of unity", partition <= 1e-10, fmt("max_err", partition));

  const auto psi = besov::psi_reference_grid(opt.grid_half_width, opt.grid_log2_size);
  double leak = 0.0;
  for (int n = -4; n <= besov::default_top_band(psi); ++n) {
    const auto spec = besov::band_piece(psi, n).spectrum();
    double peak = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double xi = std::abs(psi.frequency(k));
      peak = std::max(peak, std::abs(spec[k]));
      if (xi < std::ldexp(0.5, n) || xi > std::ldexp(2.0, n)) outside = std::max(outside, std::abs(spec[k]));
    }
    if (peak > 0.0) leak = std::max(leak, outside / peak);
  }
  out.add("besov", "band support", leak <= 1e-12, fmt("max_relative_leak", leak));

  const auto coarse = besov::besov_surrogate(psi).total;
  const auto fine =
      besov::besov_surrogate(besov::psi_reference_grid(opt.grid_half_width, opt.grid_log2_size + 1)).total;
  const double change = std::abs(fine - coarse) / fine;
  out.add("besov", "psi surrogate tail under refinement", change < 0.01,
          fmt("relative_change", change), Severity::GridDependent);
}

void counterexample_checks(Collector& out, const Options& opt, double majorant);
void lipschitz_checks(Collector& out, const Options& opt);

}  // namespace

double relative_spread(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return (*hi - *lo) / *lo;
}

ComplexMatrix naive_triple_integral(const moi::Symbol3& phi, const SpectralMeasure& e1,
                                    const ComplexMatrix& t1, const SpectralMeasure& e2,
                                    const ComplexMatrix& t2, const SpectralMeasure& e3) {
  ComplexMatrix sum = ComplexMatrix::Zero(e1.dim(), e1.dim());
  for (const auto& a : e1.atoms()) {
    for (const auto& b : e2.atoms()) {
      for (const auto& c : e3.atoms()) {
        sum += phi(a.eigenvalue, b.eigenvalue, c.eigenvalue) * a.projection() * t1 * b.projection() * t2 *
               c.projection();
      }
    }
  }
  return sum;
}

std::vector<CheckResult> run_all(const Options& opt) {
  Collector out;
  Rng rng(opt.seed);
  auto guarded = [&out](const char* module, const char* section, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out.add(module, section, false, std::string("raised: ") + e.what());
    }
  };
  guarded("linalg", "linalg invariants", [&] { linalg_checks(out, rng); });
  guarded("moi", "operator integral invariants", [&] { moi_checks(out, rng); });
  guarded("besov", "littlewood-paley invariants", [&] { besov_checks(out, opt); });

  guarded("counterexample", "counterexample sweep", [&] {
    const auto psi = besov::psi_reference_grid(opt.grid_half_width, opt.grid_log2_size);
    counterexample_checks(out, opt, besov::psi_majorant(psi));
  });
  guarded("counterexample", "rank-dependent Lipschitz bound", [&] { lipschitz_checks(out, opt); });
  return out.take();
}

namespace {

void counterexample_checks(Collector& out, const Options& opt, double majorant) {
  // Counterexample sweep.
  const InstanceOptions inst_opt{opt.eta};
  const std::vector<SchattenIndex> ps{SchattenIndex(1.0), SchattenIndex(1.5), SchattenIndex(2.0),
                                      SchattenIndex(3.0), SchattenIndex::infinity()};
  double growth = 0.0, factor = 0.0, collapse = 0.0, gram = 0.0, zero_path = 0.0;
  bool finite = true;
  std::vector<double> phi_sups, phi_sups_from4, ratios;
  std::string failure;
  const double kFailed = std::numeric_limits<double>::infinity();
  for (int n : opt.ns) try {
    const auto inst = build_instance(n, inst_opt);
    const auto diff = counterexample::growth_difference(inst);
    finite = finite && diff.difference.allFinite();
    factor = std::max(factor, diff.factorization_error);
    zero_path = std::max(zero_path, diff.zero_path_error);
    const double root = std::sqrt(static_cast<double>(n));
    for (auto p : ps) {
      const auto rec = counterexample::make_record(inst, diff, p, 0.0);
      const double err = std::abs(rec.ratio - root) / root;
      growth = std::max(growth, std::isfinite(err) ? err : 1e300);
      if (p == SchattenIndex(2.0)) ratios.push_back(rec.ratio);
    }
    const auto sv = singular_values(counterexample::phi_of_pair(inst));
    const Index above = std::count_if(sv.begin(), sv.end(), [&](double s) { return s > 1e-10 * root; });
    collapse = std::max(collapse, above == 1 ? std::abs(sv.front() - root) : 1e300);

    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) g(j, k) = inner(inst.systems.h[k], inst.systems.g[j]);
    }
    gram = std::max(gram, max_abs(g - inst.u));

    const double sup = inst.phi.grid_sup();
    if (n >= 2) phi_sups.push_back(sup);
    if (n >= 4) phi_sups_from4.push_back(sup);
  } catch (const std::exception& e) {
    failure = " raised at N=" + std::to_string(n) + ": " + e.what();
    growth = factor = collapse = kFailed;
    phi_sups.push_back(kFailed);
    phi_sups_from4.push_back(kFailed);
  }
  out.add("counterexample", "exact sqrt(N) blow-up", finite && growth <= 1e-8,
          fmt("max_relative_err", growth) + failure);
  out.add("counterexample", "factorization f(A,B,C)-f(A,B,0)=phi(A,B)C", factor <= 1e-10,
          fmt("max_err", factor) + " " + fmt("zero_path_err", zero_path));
  out.add("counterexample", "rank-one collapse of phi(A,B)", collapse <= 1e-8, fmt("max_err", collapse));
  out.add("counterexample", "gram fidelity", gram <= 1e-12, fmt("max_err", gram));
  const double symbol_spread = relative_spread(phi_sups_from4);
  out.add("counterexample", "bounded symbol", symbol_spread < 0.10, fmt("relative_spread", symbol_spread));
  bool increasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
  std::vector<double> kappas;
  for (double sup : phi_sups) kappas.push_back(sup * majorant);
  const double kappa_spread = relative_spread(kappas);
  out.add("besov", "tensor bound bounded in N", kappa_spread < 0.10,
          fmt("relative_spread", kappa_spread) + " " + fmt("psi_majorant", majorant), Severity::GridDependent);
  out.add("counterexample", "bounded surrogate, growing ratio",
          kappa_spread < 0.10 && increasing && growth <= 1e-8,
          fmt("kappa_spread", kappa_spread) + " " + fmt("growth_err", growth));
}

void lipschitz_checks(Collector& out, const Options& opt) {
  bool lipschitz = true;
  double max_ratio = 0.0;
  for (int n : {2, 3}) {
    for (auto p : {SchattenIndex(1.0), SchattenIndex(2.0), SchattenIndex::infinity()}) {
      const auto rep = bounds::lipschitz_rank_bound_check(n, p, 20, opt.seed);
      lipschitz = lipschitz && rep.all_hold();
      max_ratio = std::max(max_ratio, rep.max_ratio);
    }
  }
  out.add("counterexample", "rank-dependent Lipschitz bound", lipschitz, fmt("max_ratio", max_ratio));
}

}  // namespace

}  // namespace opcalc::selfcheck
