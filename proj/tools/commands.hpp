#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "opcalc/counterexample.hpp"
#include "run_config.hpp"

namespace opcalc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

inline constexpr const char* kGrowthHeader = "N,p,lhs,perturbation,ratio,sqrt_N,besov_surrogate";
inline constexpr const char* kBoundsHeader = "check,N,p,trial,lhs,bound,ratio,status";

struct BoundsRow {
  std::string check;  // "pairs" or "triples"
  int n;
  SchattenIndex p;
  int trial;          // -1 for a skipped cell
  double lhs;
  double bound;
  double ratio;
  std::string status;  // "ok", "violated" or "requires p >= 2"
};

std::string render_growth(const std::vector<counterexample::ExperimentRecord>& rows, OutputFormat format);
std::string render_bounds(const std::vector<BoundsRow>& rows, OutputFormat format);

// Each command writes its table (or report) to `out`, diagnostics to `err`,
// and returns the process exit status.
int cmd_growth(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_selfcheck(const RunConfig& config, std::ostream& out, std::ostream& err);

// Validates the config, runs the command and writes to the resolved output path.
int run_command(Command command, const RunConfig& config, std::ostream& err);

}  // namespace opcalc::cli
