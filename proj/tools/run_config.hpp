#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "opcalc/linalg.hpp"

namespace opcalc::cli {

enum class Command { Growth, Bounds, Selfcheck };
enum class OutputFormat { Csv, Json };

// Raised for malformed or out-of-range settings; names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("invalid value for " + field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::vector<int> ns;
  std::vector<SchattenIndex> ps;
  std::uint64_t seed;
  double grid_half_width;
  int grid_log2_size;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path;  // "-" is standard output, empty means unset
  int trials;
  double eps_power = 0.0;   // growth: C scaled by N^{-eps_power}
  bool lenient = false;     // selfcheck: grid-dependent failures only warn
  std::string fault;        // selfcheck fault injection, "" or "eta-unguarded"

  void validate() const;
};

RunConfig default_config(Command command);

// Keys: N, p, seed, grid_L, grid_m, format, out, trials, eps_power, lenient.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// Lines "key = value"; '#' starts a comment, blank lines are skipped.
void apply_config_file(RunConfig& config, const std::string& path);

std::vector<int> parse_int_list(const std::string& field, const std::string& text);
std::vector<SchattenIndex> parse_p_list(const std::string& field, const std::string& text);

// Resolves an unset output path: $OPCALC_OUTPUT_DIR/<command>.<ext> when the
// variable is set, otherwise standard output.
std::string resolve_output_path(const RunConfig& config, Command command);

const char* command_name(Command command);

}  // namespace opcalc::cli
