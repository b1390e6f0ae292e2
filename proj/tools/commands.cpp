#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "opcalc/besov.hpp"
#include "opcalc/bounds.hpp"
#include "opcalc/selfcheck.hpp"

namespace opcalc::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<SchattenIndex> sorted_unique(std::vector<SchattenIndex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::string render_growth(const std::vector<counterexample::ExperimentRecord>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"N", r.n},
                     {"p", r.p.to_string()},
                     {"lhs", r.lhs},
                     {"perturbation", r.perturbation},
                     {"ratio", r.ratio},
                     {"sqrt_N", std::sqrt(static_cast<double>(r.n))},
                     {"besov_surrogate", r.besov_surrogate}});
    }
    return arr.dump(2) + "\n";
  }
  std::string out = std::string(kGrowthHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + r.p.to_string() + "," + num(r.lhs) + "," + num(r.perturbation) + "," +
           num(r.ratio) + "," + num(std::sqrt(static_cast<double>(r.n))) + "," + num(r.besov_surrogate) + "\n";
  }
  return out;
}

std::string render_bounds(const std::vector<BoundsRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"check", r.check},
                     {"N", r.n},
                     {"p", r.p.to_string()},
                     {"trial", r.trial},
                     {"lhs", r.lhs},
                     {"bound", r.bound},
                     {"ratio", r.ratio},
                     {"status", r.status}});
    }
    return arr.dump(2) + "\n";
  }
  std::string out = std::string(kBoundsHeader) + "\n";
  for (const auto& r : rows) {
    out += r.check + "," + std::to_string(r.n) + "," + r.p.to_string() + "," + std::to_string(r.trial) + "," +
           num(r.lhs) + "," + num(r.bound) + "," + num(r.ratio) + "," + r.status + "\n";
  }
  return out;
}

int cmd_growth(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto psi = besov::psi_reference_grid(config.grid_half_width, config.grid_log2_size);
  const double majorant = besov::psi_majorant(psi);
  const auto ps = sorted_unique(config.ps);
  std::vector<counterexample::ExperimentRecord> rows;
  bool ok = true;
  for (int n : sorted_unique(config.ns)) {
    const auto inst = counterexample::build_instance(n);
    const double eps = std::pow(static_cast<double>(n), -config.eps_power);
    const auto diff = counterexample::growth_difference(inst, eps);
    const double surrogate = inst.phi.grid_sup() * majorant;
    if (diff.factorization_error > 1e-10) {
      err << "N=" << n << ": factorization error " << diff.factorization_error << " exceeds 1e-10\n";
      ok = false;
    }
    const double root = std::sqrt(static_cast<double>(n));
    for (const auto& p : ps) {
      auto rec = counterexample::make_record(inst, diff, p, surrogate);
      if (!(std::abs(rec.ratio - root) <= 1e-8 * root)) {
        err << "N=" << n << " p=" << p.to_string() << ": ratio " << num(rec.ratio) << " != sqrt(N)\n";
        ok = false;
      }
      rows.push_back(rec);
    }
  }
  out << render_growth(rows, config.format);
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<BoundsRow> rows;
  bool ok = true;
  const auto ns = sorted_unique(config.ns);
  const auto ps = sorted_unique(config.ps);
  for (int n : ns) {
    for (const auto& p : ps) {
      const auto rep = bounds::rank_estimate_check_pairs(n, p, config.trials, config.seed);
      if (rep.skipped) {
        rows.push_back(BoundsRow{"pairs", n, p, -1, 0.0, 0.0, 0.0, "requires p >= 2"});
        continue;
      }
      const double scale = std::pow(static_cast<double>(n), p.half_minus_reciprocal());
      for (const auto& t : rep.trials) {
        const bool holds = t.holds();
        ok = ok && holds;
        rows.push_back(BoundsRow{"pairs", n, p, t.trial, t.lhs_p, scale * t.besov * t.max_perturbation, t.ratio,
                                 holds ? "ok" : "violated"});
      }
    }
  }
  for (int n : ns) {
    for (const auto& p : ps) {
      const auto rep = bounds::lipschitz_rank_bound_check(n, p, config.trials, config.seed);
      for (const auto& t : rep.trials) {
        ok = ok && t.holds;
        rows.push_back(BoundsRow{"triples", n, p, t.trial, t.lhs, t.bound, t.ratio, t.holds ? "ok" : "violated"});
      }
    }
  }
  out << render_bounds(rows, config.format);
  if (!ok) err << "bounds: at least one proven inequality failed\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_selfcheck(const RunConfig& config, std::ostream& out, std::ostream& err) {
  selfcheck::Options opt;
  opt.seed = config.seed;
  opt.grid_half_width = config.grid_half_width;
  opt.grid_log2_size = config.grid_log2_size;
  opt.ns = sorted_unique(config.ns);
  if (config.fault == "eta-unguarded") opt.eta = counterexample::EtaEvaluation::Unguarded;

  int failures = 0;
  for (const auto& r : selfcheck::run_all(opt)) {
    std::string status = r.passed ? "PASS" : "FAIL";
    if (!r.passed && config.lenient && r.severity == selfcheck::Severity::GridDependent) status = "WARN";
    if (status == "FAIL") ++failures;
    out << status << " " << r.module << ": " << r.name << " (" << r.detail << ")\n";
  }
  if (failures > 0) err << "selfcheck: " << failures << " item(s) failed\n";
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

int run_command(Command command, const RunConfig& config, std::ostream& err) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::ostringstream buffer;
  int status = kExitOk;
  try {
    switch (command) {
      case Command::Growth: status = cmd_growth(config, buffer, err); break;
      case Command::Bounds: status = cmd_bounds(config, buffer, err); break;
      case Command::Selfcheck: status = cmd_selfcheck(config, buffer, err); break;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  const std::string path = resolve_output_path(config, command);
  if (path == "-") {
    std::cout << buffer.str() << std::flush;
  } else {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write '" << path << "'\n";
      return kExitCheckFailed;
    }
    file << buffer.str();
  }
  return status;
}

}  // namespace opcalc::cli
