// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opcalc/besov.hpp"
#include "opcalc/bounds.hpp"
#include "opcalc/counterexample.hpp"
#include "opcalc/moi.hpp"
#include "opcalc/random.hpp"

using namespace opcalc;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// ---- independent oracles -------------------------------------------------

struct Eigenspace {
  double value;
  ComplexMatrix projection;
};

// Spectral projections straight from Eigen, eigenvalues merged when closer than tol.
std::vector<Eigenspace> oracle_spectrum(const ComplexMatrix& a, double tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  std::vector<Eigenspace> out;
  for (Index i = 0; i < vals.size(); ++i) {
    const ComplexMatrix p = vecs.col(i) * vecs.col(i).adjoint();
    if (!out.empty() && vals(i) - vals(i - 1) <= tol) {
      out.back().projection += p;
    } else {
      out.push_back({vals(i), p});
    }
  }
  return out;
}

ComplexMatrix oracle_function(const std::function<Complex(double)>& f, const ComplexMatrix& a) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& e : oracle_spectrum(a)) out += f(e.value) * e.projection;
  return out;
}

ComplexMatrix oracle_triple(const moi::Symbol3& phi, const std::vector<Eigenspace>& e1, const ComplexMatrix& t1,
                            const std::vector<Eigenspace>& e2, const ComplexMatrix& t2,
                            const std::vector<Eigenspace>& e3) {
  ComplexMatrix sum = ComplexMatrix::Zero(t1.rows(), t2.cols());
  for (const auto& a : e1)
    for (const auto& b : e2)
      for (const auto& c : e3)
        sum += phi(a.value, b.value, c.value) * a.projection * t1 * b.projection * t2 * c.projection;
  return sum;
}

ComplexMatrix oracle_triple_function(const moi::Symbol3& f, const ComplexMatrix& a, const ComplexMatrix& b,
                                     const ComplexMatrix& c) {
  const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
  return oracle_triple(f, oracle_spectrum(a), id, oracle_spectrum(b), id, oracle_spectrum(c));
}

std::vector<double> oracle_singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

const std::vector<int> kGrowthNs{1, 2, 4, 8, 16, 32, 64};
const std::vector<SchattenIndex> kGrowthPs{SchattenIndex(1.0), SchattenIndex(1.5), SchattenIndex(2.0),
                                           SchattenIndex(3.0), SchattenIndex::infinity()};

double psi_majorant_default() {
  static const double value = besov::psi_majorant(besov::psi_reference_grid());
  return value;
}

// ---- criteria --------------------------------------------------------------

Outcome exact_blow_up() {
  double worst = 0.0;
  for (int n : kGrowthNs) {
    const auto inst = counterexample::build_instance(n);
    const auto diff = counterexample::growth_difference(inst);
    const double root = std::sqrt(static_cast<double>(n));
    for (const auto& p : kGrowthPs) {
      const auto rec = counterexample::make_record(inst, diff, p, 0.0);
      worst = std::max(worst, std::abs(rec.ratio - root) / root);
    }
  }
  return {worst <= 1e-8, fmt("max |ratio - sqrt(N)| / sqrt(N) = %.3g over 35 cells", worst)};
}

Outcome bounded_data_unbounded_ratio() {
  const auto psi = besov::psi_reference_grid();
  std::vector<double> sups, kappas, ratios;
  for (int n : kGrowthNs) {
    const auto inst = counterexample::build_instance(n);
    const double sup = inst.phi.grid_sup();
    sups.push_back(sup);
    kappas.push_back(besov::tensor_bound_kappa(sup, psi));
    const auto diff = counterexample::growth_difference(inst);
    ratios.push_back(counterexample::make_record(inst, diff, SchattenIndex(2.0), kappas.back()).ratio);
  }
  bool growing = true;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double root = std::sqrt(static_cast<double>(kGrowthNs[i]));
    growing = growing && std::abs(ratios[i] - root) <= 1e-8 * root;
    if (i > 0) growing = growing && ratios[i] > ratios[i - 1];
  }
  // ratio / kappa is the smallest K that could work at each N; it must grow.
  const double k_first = ratios.front() / kappas.front(), k_last = ratios.back() / kappas.back();
  const bool ok = relative_spread(sups) < 0.10 && relative_spread(kappas) < 0.10 && growing && k_last > 7.9 * k_first;
  return {ok, fmt("spread sup|phi| = %.3g, spread kappa = %.3g, ratio(64)/ratio(1) = %.15g", relative_spread(sups),
                  relative_spread(kappas), ratios.back() / ratios.front())};
}

Outcome perturbation_formulas() {
  Rng rng(20240501);
  std::uniform_int_distribution<int> dim_dist(1, 10);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_single = 0.0, worst_triple = 0.0;

  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = dim_dist(rng);
    const bool repeated = trial % 3 == 0;
    const auto a = repeated ? random_hermitian_with_atoms(dim, 3, rng) : random_hermitian(dim, rng);
    const auto b = repeated ? random_hermitian_with_atoms(dim, 3, rng) : random_hermitian(dim, rng);
    ComplexMatrix direct;
    moi::Symbol1 f;
    if (trial % 2 == 0) {
      const int degree = trial % 5;
      std::vector<double> c(degree + 1);
      for (double& v : c) v = normal(rng);
      f = [c](double t) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
        return Complex(v);
      };
      // Horner in matrix form, no spectral calculus involved.
      auto poly = [&](const ComplexMatrix& m) {
        ComplexMatrix v = ComplexMatrix::Zero(dim, dim);
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * m + *it * ComplexMatrix::Identity(dim, dim);
        return v;
      };
      direct = poly(a.matrix()) - poly(b.matrix());
    } else {
      f = [](double t) { return std::polar(1.0, t); };
      direct = oracle_function(f, a.matrix()) - oracle_function(f, b.matrix());
    }
    const ComplexMatrix got = moi::perturbation_via_divided_difference(f, a, b);
    worst_single = std::max(worst_single, max_abs(got - direct));
  }

  const moi::Slot slots[] = {moi::Slot::First, moi::Slot::Second, moi::Slot::Third};
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = dim_dist(rng);
    const bool repeated = trial % 3 == 0;
    auto draw = [&] { return repeated ? random_hermitian_with_atoms(dim, 3, rng) : random_hermitian(dim, rng); };
    const auto x1 = draw(), x2 = draw(), p = draw(), q = draw();
    moi::Symbol3 f;
    if (trial % 2 == 0) {
      const double c1 = normal(rng), c2 = normal(rng), c3 = normal(rng);
      f = [=](double x, double y, double z) { return Complex(c1 * x * x * y + c2 * y * z * z * z + c3 * x * z); };
    } else {
      f = [](double x, double y, double z) { return std::polar(1.0, x - 2.0 * y + 0.5 * z) + std::sin(x * z); };
    }
    for (auto slot : slots) {
      ComplexMatrix direct;
      const auto &m1 = x1.matrix(), &m2 = x2.matrix(), &mp = p.matrix(), &mq = q.matrix();
      switch (slot) {
        case moi::Slot::First:
          direct = oracle_triple_function(f, m1, mp, mq) - oracle_triple_function(f, m2, mp, mq);
          break;
        case moi::Slot::Second:
          direct = oracle_triple_function(f, mp, m1, mq) - oracle_triple_function(f, mp, m2, mq);
          break;
        case moi::Slot::Third:
          direct = oracle_triple_function(f, mp, mq, m1) - oracle_triple_function(f, mp, mq, m2);
          break;
      }
      worst_triple = std::max(worst_triple, max_abs(moi::triple_perturbation(f, slot, x1, x2, p, q) - direct));
    }
  }
  return {worst_single <= 1e-9 && worst_triple <= 1e-9,
          fmt("max error pairs = %.3g, triples (3 slots) = %.3g", worst_single, worst_triple)};
}

Outcome triple_oracle() {
  Rng rng(7);
  std::uniform_int_distribution<int> dim_dist(1, 8), atom_dist(1, 5);
  double worst = 0.0;
  std::size_t max_atoms = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int atoms[] = {atom_dist(rng), atom_dist(rng), atom_dist(rng)};
    const Index dim = std::max<Index>(dim_dist(rng), *std::max_element(atoms, atoms + 3));
    const auto a = random_hermitian_with_atoms(dim, atoms[0], rng);
    const auto b = random_hermitian_with_atoms(dim, atoms[1], rng);
    const auto c = random_hermitian_with_atoms(dim, atoms[2], rng);
    const ComplexMatrix t1 = complex_gaussian(dim, dim, rng), t2 = complex_gaussian(dim, dim, rng);
    const double w = 0.3 + trial * 0.05;
    moi::Symbol3 phi = [w](double x, double y, double z) {
      return Complex(std::cos(w * x) * y, z * z - x) / (1.0 + y * y);
    };
    const auto ea = spectral_measure(a), eb = spectral_measure(b), ec = spectral_measure(c);
    max_atoms = std::max({max_atoms, ea.size(), eb.size(), ec.size()});
    const ComplexMatrix got = moi::triple_operator_integral(phi, ea, t1, eb, t2, ec);
    const ComplexMatrix want = oracle_triple(phi, oracle_spectrum(a.matrix()), t1, oracle_spectrum(b.matrix()), t2,
                                             oracle_spectrum(c.matrix()));
    worst = std::max(worst, max_abs(got - want));
  }
  return {worst <= 1e-10 && max_atoms <= 5,
          fmt("max error = %.3g on 50 instances, at most %g atoms per measure", worst, static_cast<double>(max_atoms))};
}

Outcome littlewood_paley() {
  double worst_partition = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = std::exp2(-10.0 + 20.0 * i / 999.0);
    worst_partition = std::max(worst_partition, std::abs(besov::partition_check(s) - 1.0));
  }

  const auto psi = besov::psi_reference_grid();
  double worst_leak = 0.0;
  for (int n = besov::kLowestBand; n <= besov::default_top_band(psi); ++n) {
    const auto spec = besov::band_piece(psi, n).spectrum();
    double peak = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double xi = std::abs(psi.frequency(k));
      peak = std::max(peak, std::abs(spec[k]));
      if (xi < std::ldexp(1.0, n - 1) || xi > std::ldexp(1.0, n + 1)) outside = std::max(outside, std::abs(spec[k]));
    }
    if (peak > 0.0) worst_leak = std::max(worst_leak, outside / peak);
  }

  const double coarse = besov::besov_surrogate(psi).total;
  const double fine = besov::besov_surrogate(besov::psi_reference_grid(besov::kDefaultHalfWidth,
                                                                         besov::kDefaultLog2Size + 1)).total;
  const double change = std::abs(fine - coarse) / coarse;
  return {worst_partition <= 1e-10 && worst_leak <= 1e-12 && change < 0.02,
          fmt("partition error = %.3g, band leakage = %.3g, surrogate change m->m+1 = %.3g", worst_partition,
              worst_leak, change)};
}

Outcome lipschitz_bound() {
  bool ok = true;
  double max_ratio = 0.0;
  int total = 0;
  for (int n : {2, 3, 4}) {
    for (auto p : {SchattenIndex(1.0), SchattenIndex(2.0), SchattenIndex::infinity()}) {
      const auto rep = bounds::lipschitz_rank_bound_check(n, p, 200, kDefaultSeed);
      for (const auto& t : rep.trials) {
        // Independent evaluation of the inequality from the recorded norms.
        const double rhs = std::pow(n, 4) * t.lipschitz *
                               (t.perturbations[0] + t.perturbations[1] + t.perturbations[2]) + 1e-9;
        ok = ok && t.lhs <= rhs && t.holds;
        ++total;
      }
      max_ratio = std::max(max_ratio, rep.max_ratio);
    }
  }
  return {ok && total == 1800, fmt("%g trials, max observed lhs / (N^4 L sum) = %.3g", total, max_ratio)};
}

Outcome schatten_chain() {
  Rng rng(31);
  std::uniform_int_distribution<int> rank_dist(1, 8);
  bool ok = true;
  double worst_margin = -1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = rank_dist(rng);
    const ComplexMatrix m = random_rank_limited_matrix(12, 12, r, rng);
    const auto s = oracle_singular_values(m);
    double s2 = 0.0;
    for (double v : s) s2 += v * v;
    s2 = std::sqrt(s2);
    for (double p : {2.0, 3.0, 4.0, std::numeric_limits<double>::infinity()}) {
      double sp = 0.0;
      if (std::isinf(p)) {
        sp = s[0];
      } else {
        for (double v : s) sp += std::pow(v, p);
        sp = std::pow(sp, 1.0 / p);
      }
      const double factor = std::pow(static_cast<double>(r), 0.5 - (std::isinf(p) ? 0.0 : 1.0 / p));
      ok = ok && s2 <= factor * sp + 1e-12;
      worst_margin = std::max(worst_margin, s2 - factor * sp);
      const auto lib = bounds::finite_rank_chain(m, std::isinf(p) ? SchattenIndex::infinity() : SchattenIndex(p));
      ok = ok && lib.holds && lib.rank == r;
    }
  }
  return {ok, fmt("200 matrices, max S2 - r^(1/2-1/p) Sp = %.3g", worst_margin)};
}

Outcome epsilon_scaling() {
  const std::vector<int> ns{4, 16, 64, 256};
  const auto rule = [](int n) { return std::pow(static_cast<double>(n), -0.25); };
  const auto rows = counterexample::epsilon_scaling_run(ns, rule, SchattenIndex(2.0), psi_majorant_default());
  const double want_pert[] = {0.70710678118654752, 0.5, 0.35355339059327376, 0.25};
  const double want_diff[] = {1.4142135623730951, 2.0, 2.8284271247461903, 4.0};
  bool ok = rows.size() == ns.size();
  std::printf("    %-5s %-20s %-20s\n", "N", "perturbation", "difference");
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    std::printf("    %-5d %-20.15g %-20.15g\n", rows[i].n, rows[i].perturbation, rows[i].lhs);
    ok = ok && std::abs(rows[i].perturbation - want_pert[i]) <= 1e-8 && std::abs(rows[i].lhs - want_diff[i]) <= 1e-8;
    if (i > 0) ok = ok && rows[i].perturbation < rows[i - 1].perturbation && rows[i].lhs > rows[i - 1].lhs;
  }
  return {ok, "perturbation = N^-1/4 and difference = N^1/4 within 1e-8"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"exact sqrt(N) blow-up", exact_blow_up},
      {"bounded symbol and Besov majorant, growing ratio", bounded_data_unbounded_ratio},
      {"perturbation formula exactness", perturbation_formulas},
      {"triple integral vs naive oracle", triple_oracle},
      {"Littlewood-Paley partition and surrogate stability", littlewood_paley},
      {"N^4 Lipschitz bound for rank-N triples", lipschitz_bound},
      {"finite-rank Schatten chain", schatten_chain},
      {"epsilon scaling", epsilon_scaling},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%d] %s: %s (%.2fs)\n", out.passed ? "PASS" : "FAIL", index, c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.passed ? 0 : 1;
    ++index;
  }
  std::printf("%d/%d criteria passed\n", index - 1 - failures, index - 1);
  return failures == 0 ? 0 : 1;
}
