#pragma once

// Littlewood-Paley pieces of functions on the line, computed as Fourier
// multipliers on a uniform periodized grid, and the B^1_{inf,1} surrogates
// built from them.
//
// Fourier convention: (F f)(t) = int f(x) exp(-i x t) dx, so the multiplier of
// the n-th band is w(|xi| / 2^n) in angular frequency xi.

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "opcalc/linalg.hpp"

namespace opcalc::besov {

inline constexpr double kDefaultHalfWidth = 64.0;
inline constexpr int kDefaultLog2Size = 16;
inline constexpr int kLowestBand = -20;

// h(x) = q(x) / (q(x) + q(1 - x)), q(x) = exp(-1/x) for x > 0 and 0 otherwise.
// Smooth step, 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

// The dyadic window: supported in (1/2, 2), w(s) = 1 - w(s/2) on [1, 2].
double window_w(double s);

// sum_n w(s / 2^n); equals 1 for every s > 0.
double partition_check(double s);

// Smooth cutoff, 1 on [-1, 1] and 0 outside (-2, 2).
double cutoff_chi(double t);

// psi(t) = t * chi(t): identity on [-1, 1], zero outside [-2, 2].
double psi_reference(double t);

// Samples of a function on [-L, L) at 2^m equispaced points x_i = -L + i*dx,
// dx = 2L / 2^m, understood as one period of its 2L-periodization.
class GridFunction {
 public:
  GridFunction(double half_width, int log2_size, std::vector<Complex> samples);

  static GridFunction sample(const std::function<Complex(double)>& f, double half_width,
                             int log2_size);
  static GridFunction zeros(double half_width, int log2_size);

  double half_width() const { return half_width_; }
  int log2_size() const { return log2_size_; }
  std::size_t size() const { return samples_.size(); }
  double spacing() const { return 2.0 * half_width_ / static_cast<double>(samples_.size()); }
  double point(std::size_t i) const { return -half_width_ + static_cast<double>(i) * spacing(); }
  // Highest representable angular frequency, pi / dx.
  double nyquist() const;
  // Angular frequency of DFT bin k in standard FFT order.
  double frequency(std::size_t k) const;

  const std::vector<Complex>& samples() const { return samples_; }
  Complex operator[](std::size_t i) const { return samples_[i]; }

  double sup_norm() const;
  // Sup over points with |x| <= L/2.
  double inner_sup_norm() const;

  GridFunction operator-(const GridFunction& other) const;
  GridFunction operator+(const GridFunction& other) const;

  // Discrete spectrum scaled by dx, approximating F f on the frequency grid.
  std::vector<Complex> spectrum() const;

 private:
  void require_same_grid(const GridFunction& other) const;

  double half_width_;
  int log2_size_;
  std::vector<Complex> samples_;
};

// Inverse DFT of (DFT of f) * multiplier(|xi|).
GridFunction apply_multiplier(const GridFunction& f, const std::function<double(double)>& multiplier);

// Largest n with 2^(n-1) below the Nyquist frequency (band_piece accepts it).
int highest_admissible_band(const GridFunction& f);
// Default top band of a decomposition: floor(log2(nyquist)) - 1.
int default_top_band(const GridFunction& f);

// f_n = f * W_n, the n-th Littlewood-Paley piece. Throws BandAboveNyquist when
// the band [2^(n-1), 2^(n+1)] lies entirely at or above Nyquist.
GridFunction band_piece(const GridFunction& f, int n);

// Pieces for n in [n_min, n_max].
std::vector<std::pair<int, GridFunction>> littlewood_paley(const GridFunction& f, int n_min,
                                                           int n_max);

// Multiplier 1 - sum_{n >= n_min} w(|xi| / 2^n): everything below band n_min.
GridFunction low_frequency_remainder(const GridFunction& f, int n_min);

struct BandEntry {
  int n;
  double sup_norm;
  double weighted;  // 2^n * sup_norm
};

struct BesovBreakdown {
  std::vector<BandEntry> bands;
  double total = 0.0;
};

// Per-band 2^n * sup|g_n| and their sum.
BesovBreakdown besov_upper_bound(const std::vector<std::pair<int, GridFunction>>& pieces);

// Surrogate of ||f||_{B^1_{inf,1}} over bands [kLowestBand, default_top_band].
BesovBreakdown besov_surrogate(const GridFunction& f);

// CSV with header "n,sup_norm,weighted".
void write_breakdown_csv(std::ostream& out, const BesovBreakdown& breakdown);

// psi_reference sampled on the grid.
GridFunction psi_reference_grid(double half_width = kDefaultHalfWidth,
                                int log2_size = kDefaultLog2Size);

// sup|psi_flat| + sum_{n >= 0} 2^n sup|psi_n| with psi_flat = psi - sum_{n>=0} psi_n,
// bands n in [0, default_top_band].
double psi_majorant(const GridFunction& psi);

// phi_sup * psi_majorant(psi): the majorant of ||phi (x) psi||_{B^1_{inf,1}(R^3)}
// with the absolute constant taken as 1.
double tensor_bound_kappa(double phi_sup, const GridFunction& psi);

}  // namespace opcalc::besov
