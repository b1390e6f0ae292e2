#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct FlagValues {
  std::string config_path;
  std::optional<std::string> ns, ps, seed, grid_m, format, out, trials, eps_power;
  bool lenient = false;
  std::string fault;
};

void add_common(CLI::App* cmd, FlagValues& v) {
  cmd->add_option("--config", v.config_path, "key=value configuration file");
  cmd->add_option("--N", v.ns, "comma-separated matrix orders");
  cmd->add_option("--p", v.ps, "comma-separated Schatten indices (>= 1 or inf)");
  cmd->add_option("--seed", v.seed, "64-bit seed");
  cmd->add_option("--grid-m", v.grid_m, "log2 of the Fourier grid size, 10..22");
  cmd->add_option("--format", v.format, "csv or json");
  cmd->add_option("--out", v.out, "output file, '-' for stdout");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace opcalc::cli;
  CLI::App app{"Functions of noncommuting operator triples: growth experiments and checks"};
  app.require_subcommand(1);
  FlagValues v;

  auto* growth = app.add_subcommand("growth", "sqrt(N) blow-up table for the counterexample family");
  add_common(growth, v);
  growth->add_option("--eps-power", v.eps_power, "scale C by N^-q");

  auto* bounds = app.add_subcommand("bounds", "randomized checks of the rank-dependent upper estimates");
  add_common(bounds, v);
  bounds->add_option("--trials", v.trials, "random trials per (N, p)");

  auto* selfcheck = app.add_subcommand("selfcheck", "run every invariant check");
  add_common(selfcheck, v);
  selfcheck->add_flag("--lenient", v.lenient, "grid-dependent failures only warn");
  selfcheck->add_option("--inject-fault", v.fault, "eta-unguarded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  const Command command = growth->parsed() ? Command::Growth
                          : bounds->parsed() ? Command::Bounds
                                             : Command::Selfcheck;
  RunConfig config = default_config(command);
  try {
    if (!v.config_path.empty()) apply_config_file(config, v.config_path);
    const std::pair<const char*, const std::optional<std::string>*> flags[] = {
        {"N", &v.ns},         {"p", &v.ps},   {"seed", &v.seed},     {"grid_m", &v.grid_m},
        {"format", &v.format}, {"out", &v.out}, {"trials", &v.trials}, {"eps_power", &v.eps_power}};
    for (const auto& [key, value] : flags) {
      if (value->has_value()) apply_setting(config, key, **value);
    }
    if (v.lenient) config.lenient = true;
    config.fault = v.fault;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return run_command(command, config, std::cerr);
}
