#include "opcalc/besov.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <fftw3.h>

namespace opcalc::besov {

namespace {

double q_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// In-place DFT of `data` (sign -1 forward, +1 backward, unnormalized).
// FFTW planning is not thread-safe; callers running bands concurrently must
// serialize here.
void dft(std::vector<Complex>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> plan(
      fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE), &fftw_destroy_plan);
  fftw_execute(plan.get());
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = q_exp(x);
  const double b = q_exp(1.0 - x);
  return a / (a + b);
}

double window_w(double s) {
  if (s <= 0.5 || s >= 2.0) return 0.0;
  if (s <= 1.0) return smooth_step(2.0 * s - 1.0);
  return 1.0 - smooth_step(2.0 * (0.5 * s) - 1.0);
}

double partition_check(double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonpositiveArgument, "partition_check needs s > 0");
  const int k = static_cast<int>(std::floor(std::log2(s)));
  double sum = 0.0;
  for (int n = k - 2; n <= k + 2; ++n) sum += window_w(std::ldexp(s, -n));
  return sum;
}

double cutoff_chi(double t) {
  const double a = std::abs(t);
  const double inner = smooth_step(2.0 - a);
  const double outer = smooth_step(a - 1.0);
  return inner / (inner + outer);
}

double psi_reference(double t) {
  if (std::abs(t) <= 1.0) return t;
  return t * cutoff_chi(t);
}

GridFunction::GridFunction(double half_width, int log2_size, std::vector<Complex> samples)
    : half_width_(half_width), log2_size_(log2_size), samples_(std::move(samples)) {
  if (!(half_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "half width must be positive");
  if (log2_size < 1 || log2_size > 30) throw Error(ErrorCode::InvalidArgument, "log2 size out of range");
  if (samples_.size() != (std::size_t{1} << log2_size)) {
    throw Error(ErrorCode::DimensionMismatch, "sample count must be 2^m");
  }
  for (const Complex& v : samples_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::InvalidArgument, "grid samples must be finite");
    }
  }
}

GridFunction GridFunction::sample(const std::function<Complex(double)>& f, double half_width,
                                  int log2_size) {
  const std::size_t n = std::size_t{1} << log2_size;
  const double dx = 2.0 * half_width / static_cast<double>(n);
  std::vector<Complex> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = f(-half_width + static_cast<double>(i) * dx);
  return GridFunction(half_width, log2_size, std::move(s));
}

GridFunction GridFunction::zeros(double half_width, int log2_size) {
  return GridFunction(half_width, log2_size, std::vector<Complex>(std::size_t{1} << log2_size));
}

double GridFunction::nyquist() const { return std::numbers::pi / spacing(); }

double GridFunction::frequency(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(samples_.size());
  auto signed_k = static_cast<std::ptrdiff_t>(k);
  if (signed_k > n / 2) signed_k -= n;
  return std::numbers::pi * static_cast<double>(signed_k) / half_width_;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (const Complex& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::inner_sup_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (std::abs(point(i)) <= 0.5 * half_width_) m = std::max(m, std::abs(samples_[i]));
  }
  return m;
}

void GridFunction::require_same_grid(const GridFunction& other) const {
  if (other.half_width_ != half_width_ || other.log2_size_ != log2_size_) {
    throw Error(ErrorCode::DimensionMismatch, "grid functions live on different grids");
  }
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  require_same_grid(other);
  std::vector<Complex> out(samples_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.samples_[i];
  return GridFunction(half_width_, log2_size_, std::move(out));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  require_same_grid(other);
  std::vector<Complex> out(samples_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.samples_[i];
  return GridFunction(half_width_, log2_size_, std::move(out));
}

std::vector<Complex> GridFunction::spectrum() const {
  std::vector<Complex> data(samples_);
  dft(data, FFTW_FORWARD);
  const double dx = spacing();
  for (Complex& v : data) v *= dx;
  return data;
}

GridFunction apply_multiplier(const GridFunction& f,
                              const std::function<double(double)>& multiplier) {
  std::vector<Complex> data(f.samples());
  dft(data, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    data[k] *= multiplier(std::abs(f.frequency(k))) * scale;
  }
  dft(data, FFTW_BACKWARD);
  return GridFunction(f.half_width(), f.log2_size(), std::move(data));
}

int highest_admissible_band(const GridFunction& f) {
  // 2^(n-1) < nyquist
  int n = static_cast<int>(std::ceil(std::log2(f.nyquist()))) + 1;
  while (std::ldexp(1.0, n - 1) >= f.nyquist()) --n;
  return n;
}

int default_top_band(const GridFunction& f) {
  return static_cast<int>(std::floor(std::log2(f.nyquist()))) - 1;
}

GridFunction band_piece(const GridFunction& f, int n) {
  if (n > highest_admissible_band(f)) {
    throw Error(ErrorCode::BandAboveNyquist,
                "band " + std::to_string(n) + " starts above Nyquist " + std::to_string(f.nyquist()));
  }
  const double scale = std::ldexp(1.0, -n);
  return apply_multiplier(f, [scale](double xi) { return window_w(xi * scale); });
}

std::vector<std::pair<int, GridFunction>> littlewood_paley(const GridFunction& f, int n_min,
                                                           int n_max) {
  std::vector<std::pair<int, GridFunction>> pieces;
  for (int n = n_min; n <= n_max; ++n) pieces.emplace_back(n, band_piece(f, n));
  return pieces;
}

GridFunction low_frequency_remainder(const GridFunction& f, int n_min) {
  const double top = std::ldexp(1.0, n_min);
  return apply_multiplier(f, [n_min, top](double xi) {
    if (xi <= 0.5 * top) return 1.0;
    if (xi >= top) return 0.0;
    return 1.0 - window_w(std::ldexp(xi, -n_min));
  });
}

BesovBreakdown besov_upper_bound(const std::vector<std::pair<int, GridFunction>>& pieces) {
  BesovBreakdown out;
  for (const auto& [n, g] : pieces) {
    const double sup = g.sup_norm();
    const double weighted = std::ldexp(sup, n);
    out.bands.push_back(BandEntry{n, sup, weighted});
    out.total += weighted;
  }
  return out;
}

BesovBreakdown besov_surrogate(const GridFunction& f) {
  return besov_upper_bound(littlewood_paley(f, kLowestBand, default_top_band(f)));
}

void write_breakdown_csv(std::ostream& out, const BesovBreakdown& breakdown) {
  out << "n,sup_norm,weighted\n";
  char line[128];
  for (const auto& b : breakdown.bands) {
    std::snprintf(line, sizeof(line), "%d,%.15g,%.15g\n", b.n, b.sup_norm, b.weighted);
    out << line;
  }
}

GridFunction psi_reference_grid(double half_width, int log2_size) {
  return GridFunction::sample([](double t) { return Complex(psi_reference(t)); }, half_width,
                              log2_size);
}

double psi_majorant(const GridFunction& psi) {
  const int top = default_top_band(psi);
  GridFunction flat = psi;
  double high = 0.0;
  for (int n = 0; n <= top; ++n) {
    const GridFunction piece = band_piece(psi, n);
    high += std::ldexp(piece.sup_norm(), n);
    flat = flat - piece;
  }
  return flat.sup_norm() + high;
}

double tensor_bound_kappa(double phi_sup, const GridFunction& psi) {
  if (!(phi_sup >= 0.0)) throw Error(ErrorCode::InvalidArgument, "phi_sup must be >= 0");
  if (phi_sup == 0.0) return 0.0;
  return phi_sup * psi_majorant(psi);
}

}  // namespace opcalc::besov
