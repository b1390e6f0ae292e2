#pragma once

// Randomized checks of the rank-dependent upper estimates for functions of
// pairs and triples of finite rank Hermitian operators.

#include <array>
#include <cstdint>
#include <vector>

#include "opcalc/linalg.hpp"
#include "opcalc/moi.hpp"
#include "opcalc/random.hpp"

namespace opcalc::bounds {

// ||M||_{S_2} <= r^{1/2 - 1/p} ||M||_{S_p} with r the numerical rank of M.
struct ChainCheck {
  Index rank;
  double s2;
  double sp;
  double factor;  // r^{1/2 - 1/p}
  bool holds;
};

ChainCheck finite_rank_chain(const ComplexMatrix& m, SchattenIndex p, double slack = 1e-12);

// f(x, y) = sum_{|m|,|l| <= degree} c_ml exp(i (m x + l y)).
class TrigPolynomial2 {
 public:
  TrigPolynomial2(int degree, ComplexMatrix coefficients);
  static TrigPolynomial2 random(int degree, Rng& rng);

  int degree() const { return degree_; }
  Complex coefficient(int m, int l) const { return coeffs_(m + degree_, l + degree_); }
  Complex operator()(double x, double y) const;
  moi::Symbol2 symbol() const;

  // sum_n 2^n sum_{(m,l)} |c_ml| w(|(m,l)| / 2^n): each band's sup norm is
  // bounded by the l^1 norm of its multiplied coefficients.
  double besov_surrogate() const;

 private:
  int degree_;
  ComplexMatrix coeffs_;  // (2d+1) x (2d+1), index (m + d, l + d)
};

struct PairTrial {
  int trial;
  double lhs_p;       // ||f(A1,B1) - f(A2,B2)||_{S_p}
  double lhs_2;       // same in S_2
  double max_perturbation;  // max(||A1-A2||_{S_p}, ||B1-B2||_{S_p})
  double besov;
  double ratio;       // lhs_p / (N^{1/2-1/p} besov max_perturbation)
  ChainCheck chain_a;
  ChainCheck chain_b;
  bool monotone;      // lhs_p <= lhs_2
  bool holds() const { return monotone && chain_a.holds && chain_b.holds; }
};

struct PairReport {
  int n;
  SchattenIndex p;
  bool skipped;  // p < 2
  std::vector<PairTrial> trials;
  bool all_hold() const;
};

// Random rank <= N pairs in dimension 2N and random trigonometric f.
PairReport rank_estimate_check_pairs(int n, SchattenIndex p, int trials, std::uint64_t seed);

// f(v) = slope . v + offset + sum_m c_m min(1, |a_m . v + b_m|).
class LipschitzFunction3 {
 public:
  struct Kink {
    std::array<double, 3> a;
    double b;
    double c;
  };

  LipschitzFunction3(std::array<double, 3> slope, double offset, std::vector<Kink> kinks);
  static LipschitzFunction3 random(int kinks, Rng& rng);

  double operator()(double x, double y, double z) const;
  moi::Symbol3 symbol() const;
  // |slope| + sum |c_m| |a_m|, a majorant of the Lipschitz seminorm.
  double lipschitz_bound() const;

 private:
  std::array<double, 3> slope_;
  double offset_;
  std::vector<Kink> kinks_;
};

struct LipschitzTrial {
  int trial;
  double lhs;                           // ||f(A1,B1,C1) - f(A2,B2,C2)||_{S_p}
  std::array<double, 3> steps;          // telescoping differences, one argument at a time
  std::array<double, 3> perturbations;  // ||A1-A2||, ||B1-B2||, ||C1-C2|| in S_p
  double lipschitz;
  double bound;                         // N^4 L sum perturbations
  double ratio;                         // lhs / bound
  double telescoping_error;             // ||sum of step operators - direct difference||_max
  bool holds;
};

struct LipschitzReport {
  int n;
  SchattenIndex p;
  std::vector<LipschitzTrial> trials;
  double max_ratio = 0.0;
  bool all_hold() const;
};

// Random rank <= N triples in dimension 2N. Checks the total bound and every
// step of the telescoping argument, each step computed with the
// divided-difference expansion.
LipschitzReport lipschitz_rank_bound_check(int n, SchattenIndex p, int trials, std::uint64_t seed);

// Same check for one given function and pair of triples.
LipschitzTrial lipschitz_trial(const moi::Symbol3& f, double lipschitz, int n, SchattenIndex p,
                               const std::array<HermitianOperator, 3>& first,
                               const std::array<HermitianOperator, 3>& second, int trial = 0);

// Engine seeded from (seed, N, p) so that each sweep cell is reproducible on its own.
Rng cell_rng(std::uint64_t seed, int n, SchattenIndex p, std::uint64_t salt);

}  // namespace opcalc::bounds
