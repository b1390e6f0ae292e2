#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "opcalc/besov.hpp"
#include "opcalc/random.hpp"

namespace opcalc::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string& field, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
  return value;
}

}  // namespace

const char* command_name(Command command) {
  switch (command) {
    case Command::Growth: return "growth";
    case Command::Bounds: return "bounds";
    case Command::Selfcheck: return "selfcheck";
  }
  return "unknown";
}

std::vector<int> parse_int_list(const std::string& field, const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text)) out.push_back(parse_number<int>(field, item));
  if (out.empty()) throw ConfigError(field, "list is empty");
  return out;
}

std::vector<SchattenIndex> parse_p_list(const std::string& field, const std::string& text) {
  std::vector<SchattenIndex> out;
  for (const auto& item : split(text)) {
    try {
      out.push_back(SchattenIndex::parse(item));
    } catch (const Error&) {
      throw ConfigError(field, "'" + item + "' (p must be a number >= 1 or inf)");
    }
  }
  if (out.empty()) throw ConfigError(field, "list is empty");
  return out;
}

RunConfig default_config(Command command) {
  RunConfig c;
  c.ns = command == Command::Bounds ? std::vector<int>{2, 3, 4} : std::vector<int>{1, 2, 4, 8, 16, 32, 64};
  c.ps = {SchattenIndex(1.0), SchattenIndex(1.5), SchattenIndex(2.0), SchattenIndex(3.0),
          SchattenIndex::infinity()};
  c.seed = kDefaultSeed;
  c.grid_half_width = besov::kDefaultHalfWidth;
  c.grid_log2_size = besov::kDefaultLog2Size;
  c.trials = 20;
  return c;
}

void RunConfig::validate() const {
  if (ns.empty()) throw ConfigError("--N", "list is empty");
  for (int n : ns) {
    if (n < 1) throw ConfigError("--N", "N must be >= 1, got " + std::to_string(n));
  }
  if (ps.empty()) throw ConfigError("--p", "list is empty");
  if (!(grid_half_width > 0.0)) throw ConfigError("grid_L", "must be positive");
  if (grid_log2_size < 10 || grid_log2_size > 22) {
    throw ConfigError("--grid-m", "must lie in [10, 22], got " + std::to_string(grid_log2_size));
  }
  if (trials < 0) throw ConfigError("--trials", "must be >= 0");
  if (!(eps_power >= 0.0)) throw ConfigError("--eps-power", "must be >= 0");
  if (!fault.empty() && fault != "eta-unguarded") throw ConfigError("--inject-fault", "unknown fault '" + fault + "'");
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "N") {
    config.ns = parse_int_list("--N", value);
  } else if (key == "p") {
    config.ps = parse_p_list("--p", value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>("--seed", value);
  } else if (key == "grid_L") {
    config.grid_half_width = parse_number<double>("grid_L", value);
  } else if (key == "grid_m") {
    config.grid_log2_size = parse_number<int>("--grid-m", value);
  } else if (key == "format") {
    if (value == "csv") config.format = OutputFormat::Csv;
    else if (value == "json") config.format = OutputFormat::Json;
    else throw ConfigError("--format", "'" + value + "' (expected csv or json)");
  } else if (key == "out") {
    config.output_path = value;
  } else if (key == "trials") {
    config.trials = parse_number<int>("--trials", value);
  } else if (key == "eps_power") {
    config.eps_power = parse_number<double>("--eps-power", value);
  } else if (key == "lenient") {
    if (value == "true" || value == "1") config.lenient = true;
    else if (value == "false" || value == "0") config.lenient = false;
    else throw ConfigError("lenient", "'" + value + "' (expected true or false)");
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--config", path + ":" + std::to_string(number) + ": expected key = value");
    }
    apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

std::string resolve_output_path(const RunConfig& config, Command command) {
  if (!config.output_path.empty()) return config.output_path;
  if (const char* dir = std::getenv("OPCALC_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    const char* ext = config.format == OutputFormat::Json ? "json" : "csv";
    return std::string(dir) + "/" + command_name(command) + "." + ext;
  }
  return "-";
}

}  // namespace opcalc::cli
