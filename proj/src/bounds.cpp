#include "opcalc/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "opcalc/besov.hpp"

namespace opcalc::bounds {

namespace {

constexpr double kBoundSlack = 1e-9;

std::uint32_t p_code(SchattenIndex p) {
  if (p.is_infinite()) return 0xffffffffu;
  return static_cast<std::uint32_t>(std::llround(p.value() * 1000.0));
}

}  // namespace

Rng cell_rng(std::uint64_t seed, int n, SchattenIndex p, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), p_code(p), static_cast<std::uint32_t>(salt)};
  return Rng(seq);
}

ChainCheck finite_rank_chain(const ComplexMatrix& m, SchattenIndex p, double slack) {
  const auto s = singular_values(m);
  const double s2 = schatten_norm_from_singular_values(s, SchattenIndex(2.0));
  const double sp = schatten_norm_from_singular_values(s, p);
  Index rank = 0;
  if (!s.empty() && s.front() > 0.0) {
    const double cutoff = 1e-14 * s.front();
    rank = static_cast<Index>(std::count_if(s.begin(), s.end(), [&](double v) { return v >= cutoff; }));
  }
  const double factor = rank == 0 ? 0.0 : std::pow(static_cast<double>(rank), p.half_minus_reciprocal());
  return ChainCheck{rank, s2, sp, factor, s2 <= factor * sp + slack};
}

TrigPolynomial2::TrigPolynomial2(int degree, ComplexMatrix coefficients)
    : degree_(degree), coeffs_(std::move(coefficients)) {
  if (degree < 0 || coeffs_.rows() != 2 * degree + 1 || coeffs_.cols() != 2 * degree + 1) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient matrix must be (2d+1) x (2d+1)");
  }
}

TrigPolynomial2 TrigPolynomial2::random(int degree, Rng& rng) {
  const int size = 2 * degree + 1;
  return TrigPolynomial2(degree, complex_gaussian(size, size, rng));
}

Complex TrigPolynomial2::operator()(double x, double y) const {
  Complex sum(0.0);
  for (int m = -degree_; m <= degree_; ++m) {
    for (int l = -degree_; l <= degree_; ++l) {
      sum += coefficient(m, l) * std::polar(1.0, m * x + l * y);
    }
  }
  return sum;
}

moi::Symbol2 TrigPolynomial2::symbol() const {
  return [self = *this](double x, double y) { return self(x, y); };
}

double TrigPolynomial2::besov_surrogate() const {
  // |xi| <= sqrt(2) d, so bands above log2(sqrt(2) d) + 1 are empty; the
  // constant term lies in no band.
  const int top = static_cast<int>(std::ceil(std::log2(std::sqrt(2.0) * std::max(degree_, 1)))) + 1;
  double total = 0.0;
  for (int n = -2; n <= top; ++n) {
    double band_sup = 0.0;
    for (int m = -degree_; m <= degree_; ++m) {
      for (int l = -degree_; l <= degree_; ++l) {
        const double xi = std::hypot(static_cast<double>(m), static_cast<double>(l));
        band_sup += std::abs(coefficient(m, l)) * besov::window_w(std::ldexp(xi, -n));
      }
    }
    total += std::ldexp(band_sup, n);
  }
  return total;
}

bool PairReport::all_hold() const {
  return std::all_of(trials.begin(), trials.end(), [](const PairTrial& t) { return t.holds(); });
}

PairReport rank_estimate_check_pairs(int n, SchattenIndex p, int trials, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  PairReport report{n, p, p < SchattenIndex(2.0), {}};
  if (report.skipped) return report;
  Rng rng = cell_rng(seed, n, p, 1);
  const Index dim = 2 * n;
  const double rank_factor = std::pow(static_cast<double>(n), p.half_minus_reciprocal());
  for (int t = 0; t < trials; ++t) {
    const auto a1 = random_rank_limited_hermitian(dim, n, rng);
    const auto b1 = random_rank_limited_hermitian(dim, n, rng);
    const auto a2 = random_rank_limited_hermitian(dim, n, rng);
    const auto b2 = random_rank_limited_hermitian(dim, n, rng);
    const auto f = TrigPolynomial2::random(3, rng);
    const auto symbol = f.symbol();
    const ComplexMatrix delta =
        moi::apply_function_pair(symbol, a1, b1) - moi::apply_function_pair(symbol, a2, b2);

    PairTrial trial{};
    trial.trial = t;
    trial.lhs_p = schatten_norm(delta, p);
    trial.lhs_2 = schatten_norm(delta, SchattenIndex(2.0));
    trial.monotone = trial.lhs_p <= trial.lhs_2 + 1e-12;
    trial.chain_a = finite_rank_chain(a1.matrix() - a2.matrix(), p);
    trial.chain_b = finite_rank_chain(b1.matrix() - b2.matrix(), p);
    trial.max_perturbation = std::max(trial.chain_a.sp, trial.chain_b.sp);
    trial.besov = f.besov_surrogate();
    trial.ratio = trial.lhs_p / (rank_factor * trial.besov * trial.max_perturbation);
    report.trials.push_back(trial);
  }
  return report;
}

LipschitzFunction3::LipschitzFunction3(std::array<double, 3> slope, double offset,
                                       std::vector<Kink> kinks)
    : slope_(slope), offset_(offset), kinks_(std::move(kinks)) {}

LipschitzFunction3 LipschitzFunction3::random(int kinks, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<double, 3> slope{normal(rng), normal(rng), normal(rng)};
  const double offset = normal(rng);
  std::vector<Kink> list;
  for (int m = 0; m < kinks; ++m) {
    Kink k{{3.0 * normal(rng), 3.0 * normal(rng), 3.0 * normal(rng)}, normal(rng), normal(rng)};
    list.push_back(k);
  }
  return LipschitzFunction3(slope, offset, std::move(list));
}

double LipschitzFunction3::operator()(double x, double y, double z) const {
  double v = slope_[0] * x + slope_[1] * y + slope_[2] * z + offset_;
  for (const auto& k : kinks_) {
    v += k.c * std::min(1.0, std::abs(k.a[0] * x + k.a[1] * y + k.a[2] * z + k.b));
  }
  return v;
}

moi::Symbol3 LipschitzFunction3::symbol() const {
  return [self = *this](double x, double y, double z) { return Complex(self(x, y, z)); };
}

double LipschitzFunction3::lipschitz_bound() const {
  auto norm = [](const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
  double l = norm(slope_);
  for (const auto& k : kinks_) l += std::abs(k.c) * norm(k.a);
  return l;
}

bool LipschitzReport::all_hold() const {
  return std::all_of(trials.begin(), trials.end(), [](const LipschitzTrial& t) { return t.holds; });
}

LipschitzTrial lipschitz_trial(const moi::Symbol3& f, double lipschitz, int n, SchattenIndex p,
                               const std::array<HermitianOperator, 3>& first,
                               const std::array<HermitianOperator, 3>& second, int trial) {
  const auto& [a1, b1, c1] = first;
  const auto& [a2, b2, c2] = second;
  const ComplexMatrix total =
      moi::apply_function_triple(f, a1, b1, c1) - moi::apply_function_triple(f, a2, b2, c2);
  const std::array<ComplexMatrix, 3> steps{
      moi::triple_perturbation(f, moi::Slot::First, a1, a2, b1, c1),
      moi::triple_perturbation(f, moi::Slot::Second, b1, b2, a2, c1),
      moi::triple_perturbation(f, moi::Slot::Third, c1, c2, a2, b2),
  };
  const double n4 = std::pow(static_cast<double>(n), 4);

  LipschitzTrial out{};
  out.trial = trial;
  out.lhs = schatten_norm(total, p);
  out.perturbations = {schatten_norm(a1.matrix() - a2.matrix(), p),
                       schatten_norm(b1.matrix() - b2.matrix(), p),
                       schatten_norm(c1.matrix() - c2.matrix(), p)};
  out.lipschitz = lipschitz;
  out.bound = n4 * lipschitz * (out.perturbations[0] + out.perturbations[1] + out.perturbations[2]);
  out.ratio = out.bound > 0.0 ? out.lhs / out.bound : 0.0;
  out.telescoping_error = max_abs(steps[0] + steps[1] + steps[2] - total);
  out.holds = out.lhs <= out.bound + kBoundSlack;
  for (int i = 0; i < 3; ++i) {
    out.steps[static_cast<std::size_t>(i)] = schatten_norm(steps[static_cast<std::size_t>(i)], p);
    out.holds = out.holds && out.steps[static_cast<std::size_t>(i)] <=
                                 n4 * lipschitz * out.perturbations[static_cast<std::size_t>(i)] + kBoundSlack;
  }
  out.holds = out.holds && out.telescoping_error <= kBoundSlack * std::max(1.0, max_abs(total));
  return out;
}

LipschitzReport lipschitz_rank_bound_check(int n, SchattenIndex p, int trials, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  LipschitzReport report{n, p, {}, 0.0};
  Rng rng = cell_rng(seed, n, p, 2);
  const Index dim = 2 * n;
  for (int t = 0; t < trials; ++t) {
    std::array<HermitianOperator, 3> first{random_rank_limited_hermitian(dim, n, rng),
                                           random_rank_limited_hermitian(dim, n, rng),
                                           random_rank_limited_hermitian(dim, n, rng)};
    std::array<HermitianOperator, 3> second{random_rank_limited_hermitian(dim, n, rng),
                                            random_rank_limited_hermitian(dim, n, rng),
                                            random_rank_limited_hermitian(dim, n, rng)};
    const auto f = LipschitzFunction3::random(3, rng);
    auto trial = lipschitz_trial(f.symbol(), f.lipschitz_bound(), n, p, first, second, t);
    report.max_ratio = std::max(report.max_ratio, trial.ratio);
    report.trials.push_back(trial);
  }
  return report;
}

}  // namespace opcalc::bounds
