#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"

using namespace opcalc;
using namespace opcalc::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("opcalc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout and stderr captured to files; returns the exit status.
int run_cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
  const fs::path o = scratch_dir() / "stdout.txt", e = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string("env -u OPCALC_OUTPUT_DIR ") + OPCALC_CLI_PATH + " " + args + " > " +
                          o.string() + " 2> " + e.string();
  const int status = std::system(cmd.c_str());
  if (out) *out = slurp(o);
  if (err) *err = slurp(e);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("parse lists") {
  CHECK(parse_int_list("N", "1,2, 4") == std::vector<int>{1, 2, 4});
  CHECK_THROWS_AS(parse_int_list("N", "1,x"), ConfigError);
  CHECK_THROWS_AS(parse_int_list("N", ""), ConfigError);
  const auto ps = parse_p_list("p", "1,1.5,inf");
  REQUIRE(ps.size() == 3);
  CHECK(ps[2].is_infinite());
  try {
    parse_p_list("--p", "0.5");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "--p");
    CHECK(std::string(e.what()).find("--p") != std::string::npos);
  }
}

TEST_CASE("default config and validation") {
  const auto g = default_config(Command::Growth);
  CHECK(g.ns == std::vector<int>{1, 2, 4, 8, 16, 32, 64});
  CHECK(g.ps.size() == 5);
  CHECK(g.seed == 20240501u);
  CHECK_NOTHROW(g.validate());
  RunConfig bad = g;
  bad.grid_log2_size = 9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = g;
  bad.ns = {0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = g;
  bad.ps.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("settings and config files") {
  RunConfig c = default_config(Command::Growth);
  apply_setting(c, "N", "3");
  apply_setting(c, "format", "json");
  CHECK(c.ns == std::vector<int>{3});
  CHECK(c.format == OutputFormat::Json);
  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "format", "xml"), ConfigError);

  const fs::path file = scratch_dir() / "run.cfg";
  std::ofstream(file) << "# sweep\nN = 2,8\n\np = inf\nseed = 7\n";
  RunConfig d = default_config(Command::Growth);
  apply_config_file(d, file.string());
  CHECK(d.ns == std::vector<int>{2, 8});
  CHECK(d.ps.size() == 1);
  CHECK(d.seed == 7u);
  CHECK_THROWS_AS(apply_config_file(d, (scratch_dir() / "missing.cfg").string()), ConfigError);
}

TEST_CASE("growth rendering has the fixed CSV header") {
  RunConfig c = default_config(Command::Growth);
  c.ns = {4};
  c.ps = {SchattenIndex(2.0)};
  std::ostringstream out, err;
  CHECK(cmd_growth(c, out, err) == kExitOk);
  CHECK(first_line(out.str()) == "N,p,lhs,perturbation,ratio,sqrt_N,besov_surrogate");
}

TEST_CASE("growth: N = 4, p = 2 gives ratio 2") {
  std::string out;
  CHECK(run_cli("growth --N 4 --p 2", &out) == 0);
  std::istringstream lines(out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "N,p,lhs,perturbation,ratio,sqrt_N,besov_surrogate");
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  REQUIRE(cells.size() == 7);
  CHECK(cells[0] == "4");
  CHECK(cells[1] == "2");
  CHECK(std::abs(std::stod(cells[4]) - 2.0) <= 2e-8);
  CHECK(out.find('\r') == std::string::npos);
}

TEST_CASE("growth: N = 1 with every default p exits 0") {
  std::string out;
  CHECK(run_cli("growth --N 1", &out) == 0);
  CHECK(std::count(out.begin(), out.end(), '\n') == 6);
  CHECK(out.find("\n1,inf,1,1,1,1,") != std::string::npos);
}

TEST_CASE("growth rows are sorted by (N, p) and deduplicated") {
  std::string out;
  CHECK(run_cli("growth --N 4,1,4 --p inf,1", &out) == 0);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  std::vector<std::string> keys;
  while (std::getline(lines, line)) keys.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
  CHECK(keys == std::vector<std::string>{"1,1", "1,inf", "4,1", "4,inf"});
}

TEST_CASE("malformed p exits 2 and names the field") {
  std::string out, err;
  CHECK(run_cli("growth --p 0.5", &out, &err) == 2);
  CHECK(err.find("--p") != std::string::npos);
  CHECK(out.empty());
  CHECK(run_cli("growth --grid-m 5", nullptr, &err) == 2);
  CHECK(err.find("grid") != std::string::npos);
  CHECK(run_cli("growth --format xml") == 2);
  CHECK(run_cli("growth --bogus") == 2);
  CHECK(run_cli("") == 2);
}

TEST_CASE("JSON output mirrors the CSV columns") {
  std::string out;
  CHECK(run_cli("growth --N 2 --p 1,inf --format json", &out) == 0);
  const auto j = nlohmann::json::parse(out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[1]["p"] == "inf");
  CHECK(j[0]["N"] == 2);
  for (const char* key : {"lhs", "perturbation", "ratio", "sqrt_N", "besov_surrogate"}) CHECK(j[0].contains(key));
}

TEST_CASE("output files are byte-identical across runs") {
  const fs::path a = scratch_dir() / "a.csv", b = scratch_dir() / "b.csv";
  CHECK(run_cli("bounds --N 2 --p 2,inf --trials 3 --out " + a.string()) == 0);
  CHECK(run_cli("bounds --N 2 --p 2,inf --trials 3 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(first_line(slurp(a)) == "check,N,p,trial,lhs,bound,ratio,status");
  const fs::path c = scratch_dir() / "c.csv";
  CHECK(run_cli("bounds --N 2 --p 2,inf --trials 3 --seed 5 --out " + c.string()) == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("growth output is identical across runs") {
  const fs::path a = scratch_dir() / "g1.csv", b = scratch_dir() / "g2.csv";
  CHECK(run_cli("growth --N 1,3,8 --out " + a.string()) == 0);
  CHECK(run_cli("growth --N 1,3,8 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("config file is overridden by flags") {
  const fs::path cfg = scratch_dir() / "growth.cfg";
  std::ofstream(cfg) << "N = 9\np = 2\n";
  std::string out;
  CHECK(run_cli("growth --config " + cfg.string(), &out) == 0);
  CHECK(out.find("\n9,2,") != std::string::npos);
  CHECK(run_cli("growth --config " + cfg.string() + " --N 4", &out) == 0);
  CHECK(out.find("\n4,2,") != std::string::npos);
  CHECK(out.find("\n9,") == std::string::npos);
  std::ofstream(cfg) << "p = 0.5\n";
  CHECK(run_cli("growth --config " + cfg.string()) == 2);
}

TEST_CASE("output directory comes from the environment when --out is unset") {
  const fs::path dir = scratch_dir() / "envout";
  fs::create_directories(dir);
  const std::string cmd = "OPCALC_OUTPUT_DIR=" + dir.string() + " " + OPCALC_CLI_PATH + " growth --N 2 --p 2";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(first_line(slurp(dir / "growth.csv")) == "N,p,lhs,perturbation,ratio,sqrt_N,besov_surrogate");
}

TEST_CASE("bounds: trials = 0 gives an empty table") {
  std::string out;
  CHECK(run_cli("bounds --N 2 --p 2 --trials 0", &out) == 0);
  CHECK(out == "check,N,p,trial,lhs,bound,ratio,status\n");
}

TEST_CASE("bounds: p = 1 skips the pair check") {
  std::string out;
  CHECK(run_cli("bounds --N 2 --p 1 --trials 2", &out) == 0);
  CHECK(out.find("pairs,2,1,-1,0,0,0,requires p >= 2") != std::string::npos);
  CHECK(out.find("triples,2,1,0,") != std::string::npos);
  CHECK(out.find("violated") == std::string::npos);
}

TEST_CASE("bounds default sweep passes") {
  std::string out;
  CHECK(run_cli("bounds --trials 5", &out) == 0);
  CHECK(out.find("violated") == std::string::npos);
}

TEST_CASE("selfcheck passes by default") {
  std::string out;
  CHECK(run_cli("selfcheck", &out) == 0);
  CHECK(out.find("FAIL") == std::string::npos);
  CHECK(out.find("PASS") != std::string::npos);
}

TEST_CASE("selfcheck detects the unguarded eta") {
  std::string out;
  CHECK(run_cli("selfcheck --inject-fault eta-unguarded", &out) == 1);
  CHECK(out.find("FAIL counterexample") != std::string::npos);
  CHECK(out.find("FAIL") != std::string::npos);
  CHECK(run_cli("selfcheck --inject-fault something-else") == 2);
}

TEST_CASE("selfcheck on a coarse grid honours --lenient") {
  std::string strict, lenient;
  const int strict_status = run_cli("selfcheck --grid-m 10", &strict);
  const int lenient_status = run_cli("selfcheck --grid-m 10 --lenient", &lenient);
  CHECK(lenient_status == 0);
  if (strict_status != 0) {
    CHECK(strict.find("FAIL") != std::string::npos);
    CHECK(lenient.find("WARN") != std::string::npos);
  }
  CHECK(lenient.find("FAIL") == std::string::npos);
}
