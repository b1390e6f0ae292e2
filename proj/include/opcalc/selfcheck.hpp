#pragma once

// Invariant suite over all modules, run by the `selfcheck` command.

#include <cstdint>
#include <string>
#include <vector>

#include "opcalc/counterexample.hpp"
#include "opcalc/random.hpp"

namespace opcalc::selfcheck {

enum class Severity {
  Hard,
  // Depends on the Fourier grid resolution; may be downgraded to a warning.
  GridDependent,
};

struct CheckResult {
  std::string module;
  std::string name;
  bool passed;
  Severity severity;
  std::string detail;
};

struct Options {
  std::uint64_t seed = kDefaultSeed;
  double grid_half_width = besov::kDefaultHalfWidth;
  int grid_log2_size = besov::kDefaultLog2Size;
  std::vector<int> ns{1, 2, 4, 8, 16, 32, 64};
  counterexample::EtaEvaluation eta = counterexample::EtaEvaluation::Guarded;
};

std::vector<CheckResult> run_all(const Options& options);

// Naive sum over atom triples of Phi * E1 T1 E2 T2 E3 with explicit projections.
ComplexMatrix naive_triple_integral(const moi::Symbol3& phi, const SpectralMeasure& e1,
                                    const ComplexMatrix& t1, const SpectralMeasure& e2,
                                    const ComplexMatrix& t2, const SpectralMeasure& e3);

// (max - min) / min over positive values.
double relative_spread(const std::vector<double>& values);

}  // namespace opcalc::selfcheck
