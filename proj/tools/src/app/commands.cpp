#include "nematic/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "nematic/app/convergence.hpp"
#include "nematic/app/manifest.hpp"
#include "nematic/app/reports.hpp"
#include "nematic/config.hpp"
#include "nematic/error.hpp"
#include "nematic/keyvalue.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/threads.hpp"

#ifndef NEMATIC_VERSION_STRING
#define NEMATIC_VERSION_STRING "unknown"
#endif

namespace nematic::app {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";

struct CoefficientInput {
  CoefficientSet c;
  int dim = 3;
};

/// Coefficients from any file holding a [coefficients] section; dim comes from
/// the override, then [grid], then 3.
CoefficientInput load_coefficients(const std::string& path, int dim_override) {
  const kv::Document doc = kv::load(path);
  const kv::Section* cs = doc.find("coefficients");
  if (!cs) throw Error(ErrorCode::Config, path + ": missing [coefficients] section");
  CoefficientInput in;
  if (dim_override > 0) {
    in.dim = dim_override;
  } else if (const kv::Section* gs = doc.find("grid"); gs && gs->find("dim")) {
    in.dim = static_cast<int>(kv::to_integer(doc, *gs->find("dim")));
  }
  if (in.dim < 2) throw Error(ErrorCode::Config, path + ": dim must be at least 2");
  in.c = coefficients_from_section(doc, *cs, std::min(in.dim, 3));
  return in;
}

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

Snapshot snapshot_of(const SimState& s) {
  Snapshot snap;
  snap.grid = s.grid();
  snap.time = s.t;
  const int d = s.grid()->dim();
  for (int i = 0; i < d; ++i) snap.fields.emplace_back("u" + std::to_string(i), s.u[i]);
  for (int i = 0; i < d; ++i) snap.fields.emplace_back("n" + std::to_string(i), s.n[i]);
  snap.fields.emplace_back("theta", s.theta);
  snap.fields.emplace_back("p", s.p);
  return snap;
}

struct SimulateOptions {
  std::string config;
  std::string out;
  bool snapshots = false;
  int diag_stride = 0;
  std::optional<std::uint64_t> seed;
};

struct RunTotals {
  double min_production = INFINITY;
  double max_production_scale = 0.0;
  double min_entropy_change = INFINITY;
  double max_constraint_violation = 0.0;
  double max_constraint_drift = 0.0;
  double max_first_law_residual = 0.0;
  int max_picard_iterations = 0;
  std::size_t rows = 0;
};

int simulate(const SimulateOptions& opt) {
  const RunConfig rc = parse_config(opt.config, opt.seed);
  SolverConfig cfg = rc.solver;
  if (opt.diag_stride > 0) cfg.diagnostics_stride = opt.diag_stride;
  if (opt.snapshots && cfg.snapshot_stride == 0) cfg.snapshot_stride = cfg.diagnostics_stride;
  cfg.validate();

  fs::create_directories(opt.out);
  const fs::path dir(opt.out);
  {
    std::ofstream cf(dir / "config.ini", std::ios::binary | std::ios::trunc);
    cf << rc.text;
  }
  if (cfg.snapshot_stride > 0) fs::create_directories(dir / "snapshots");
  for (const auto& w : rc.warnings) std::cerr << "warning: " << w << '\n';

  RunManifest manifest;
  manifest.config_hash = sha256_hex(rc.text);
  manifest.version = NEMATIC_VERSION_STRING;
  manifest.seed = cfg.seed;
  manifest.started = utc_now();
  manifest.take_inventory(opt.out, kManifest);
  const std::string manifest_path = (dir / kManifest).string();
  manifest.write_atomic(manifest_path);

  std::ofstream csv(dir / "diagnostics.csv", std::ios::binary | std::ios::trunc);
  if (!csv) throw Error(ErrorCode::Io, (dir / "diagnostics.csv").string() + ": cannot open for writing");
  csv << csv_header() << '\n';

  const CoefficientSet& c = rc.coefficients;
  const std::size_t last = cfg.step_count();
  RunTotals totals;
  std::optional<DiagnosticsRecord> first, final_record;
  std::optional<SimState> prev;
  double prev_entropy = 0.0;

  auto observer = [&](std::size_t step, const SimState& s, const StepReport& report) {
    const bool diag = step % static_cast<std::size_t>(cfg.diagnostics_stride) == 0 || step == last;
    if (diag) {
      const DiagnosticsRecord r = diagnose(step, s, prev ? &*prev : nullptr, c, report, cfg.subsystem);
      write_csv_row(csv, r);
      ++totals.rows;
      totals.min_production = std::min(totals.min_production, r.min_pointwise_production);
      totals.max_production_scale = std::max(totals.max_production_scale, std::abs(r.max_pointwise_production));
      totals.max_constraint_violation = std::max(totals.max_constraint_violation, r.constraint_violation);
      totals.max_constraint_drift = std::max(totals.max_constraint_drift, r.constraint_drift);
      totals.max_first_law_residual = std::max(totals.max_first_law_residual, r.first_law_residual_norm);
      totals.max_picard_iterations = std::max(totals.max_picard_iterations, r.picard_iterations);
      if (first) totals.min_entropy_change = std::min(totals.min_entropy_change, r.total_entropy - prev_entropy);
      prev_entropy = r.total_entropy;
      if (!first) first = r;
      final_record = r;
    }
    if (cfg.snapshot_stride > 0 && (step % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || step == last)) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%08zu.bin", step);
      write_snapshot((dir / "snapshots" / name).string(), snapshot_of(s));
    }
    prev = s;
  };

  auto finalize = [&](const std::string& status) {
    csv.flush();
    manifest.status = status;
    manifest.finished = utc_now();
    manifest.take_inventory(opt.out, kManifest);
    manifest.write_atomic(manifest_path);
  };

  RunResult result;
  try {
    result = run(rc.initial, c, cfg, observer);
  } catch (const Error& e) {
    finalize(std::string("failed: ") + std::string(error_label(e.code())));
    throw;
  }
  csv.close();

  Json summary;
  summary["version"] = NEMATIC_VERSION_STRING;
  summary["config_hash"] = manifest.config_hash;
  summary["seed"] = cfg.seed;
  summary["dim"] = rc.grid->dim();
  Json res = Json::array();
  for (int a = 0; a < rc.grid->dim(); ++a) res.push_back(rc.grid->resolution(a));
  summary["resolution"] = res;
  summary["initial_data"] = rc.initial_description;
  summary["scheme"] = scheme_name(cfg.scheme);
  summary["subsystem"] = subsystem_name(cfg.subsystem);
  summary["dt"] = cfg.dt;
  summary["steps"] = result.steps;
  summary["t_final"] = result.final_state.t;
  summary["diagnostic_rows"] = totals.rows;
  summary["warnings"] = rc.warnings;
  if (first && final_record) {
    summary["initial"] = to_json(*first);
    summary["final"] = to_json(*final_record);
    const double e0 = first->total_energy;
    summary["relative_energy_drift"] = std::abs(final_record->total_energy - e0) / std::max(std::abs(e0), 1e-300);
  }
  summary["min_pointwise_production"] = totals.min_production;
  summary["max_pointwise_production_magnitude"] = totals.max_production_scale;
  summary["min_entropy_change"] = std::isfinite(totals.min_entropy_change) ? Json(totals.min_entropy_change) : Json();
  summary["max_constraint_violation"] = totals.max_constraint_violation;
  summary["max_constraint_drift"] = totals.max_constraint_drift;
  summary["max_first_law_residual_norm"] = totals.max_first_law_residual;
  summary["max_picard_iterations"] = totals.max_picard_iterations;
  summary["threads"] = thread_count();
  {
    std::ofstream out(dir / "summary.json", std::ios::binary | std::ios::trunc);
    out << summary.dump(2) << '\n';
  }
  finalize("completed");
  std::cout << "completed " << result.steps << " steps, t = " << result.final_state.t << ", output in " << opt.out
            << '\n';
  return 0;
}

double linspace(double lo, double hi, int i, int n) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator and verification suite for non-isothermal nematic liquid crystals",
               "nematic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NEMATIC_VERSION_STRING);
  app.footer("Worker threads are taken from NEMATIC_THREADS (default 1).\n"
             "Exit status: 0 ok, 2 config, 3 ellipticity, 4 blow-up, 5 Picard non-convergence.");

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a simulation from a config file");
  simulate_cmd->add_option("--config", sim.config, "Config file")->required();
  simulate_cmd->add_option("--out", sim.out, "Output directory")->required();
  simulate_cmd->add_flag("--snapshots", sim.snapshots, "Write field snapshots (stride from config or diagnostics)");
  simulate_cmd->add_option("--diag-stride", sim.diag_stride, "Diagnostics stride in steps")->check(CLI::PositiveNumber);
  std::uint64_t seed_value = 0;
  auto* seed_opt = simulate_cmd->add_option("--seed", seed_value, "Seed override");

  std::string coeff_path;
  int coeff_dim = 0;
  double theta = NAN, theta_max = NAN;
  int samples = 1;
  int oracle_trials = 10000;
  std::uint64_t oracle_seed = kOracleSeed;
  auto* check_cmd = app.add_subcommand("check-coefficients", "Admissibility report of a coefficient set as JSON");
  check_cmd->add_option("--config,--coefficients", coeff_path, "File with a [coefficients] section")->required();
  check_cmd->add_option("--dim", coeff_dim, "Dimension (default: [grid] dim or 3)");
  check_cmd->add_option("--theta", theta, "Temperature (default theta_ref)");
  check_cmd->add_option("--theta-max", theta_max, "Upper end of a temperature range starting at --theta");
  check_cmd->add_option("--samples", samples, "Temperatures sampled over the range")->check(CLI::PositiveNumber);
  check_cmd->add_option("--oracle-trials", oracle_trials, "Sampling oracle trials (0 disables)")
      ->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--seed", oracle_seed, "Oracle seed");

  auto* oracle_cmd = app.add_subcommand("oracle", "Sampled minimum of the dissipation quadratic form as JSON");
  oracle_cmd->add_option("--config,--coefficients", coeff_path, "File with a [coefficients] section")->required();
  oracle_cmd->add_option("--dim", coeff_dim, "Dimension (default: [grid] dim or 3)");
  oracle_cmd->add_option("--theta", theta, "Temperature (default theta_ref)");
  oracle_cmd->add_option("--trials", oracle_trials, "Random trials")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--seed", oracle_seed, "Seed");

  BesovAuditOptions audit;
  auto* audit_cmd = app.add_subcommand("besov-audit", "Fitted constants of the Besov estimates as JSON");
  audit_cmd->add_option("--dim", audit.dim, "Dimension")->check(CLI::IsMember({2, 3}));
  audit_cmd->add_option("--resolution", audit.resolution, "Points per axis")->check(CLI::Range(8, 256));
  audit_cmd->add_option("--trials", audit.trials, "Random trials per estimate")->check(CLI::PositiveNumber);
  audit_cmd->add_option("--seed", audit.seed, "Seed");
  audit_cmd->add_option("--horizon", audit.horizon, "Time horizon of the smoothing estimate")
      ->check(CLI::PositiveNumber);

  ConvergenceOptions conv;
  std::string conv_config;
  auto* conv_cmd = app.add_subcommand("convergence", "Refinement study: temporal orders and spatial errors as JSON");
  conv_cmd->add_option("--config,--coefficients", conv_config, "File with a [coefficients] section (default isotropic)");
  conv_cmd->add_option("--dim", conv.dim, "Dimension")->check(CLI::IsMember({2, 3}));
  conv_cmd->add_option("--levels", conv.levels, "Refinement levels");
  conv_cmd->add_option("--dt0", conv.dt0, "Coarsest time step");
  conv_cmd->add_option("--horizon", conv.horizon, "Final time of the temporal studies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: usage: " << msg << '\n';
    return 2;
  }

  try {
    if (*simulate_cmd) {
      if (*seed_opt) sim.seed = seed_value;
      return simulate(sim);
    }
    if (*check_cmd || *oracle_cmd) {
      const CoefficientInput in = load_coefficients(coeff_path, coeff_dim);
      const double t0 = std::isnan(theta) ? in.c.theta_ref : theta;
      if (*oracle_cmd) {
        const ViscositySample s = viscosity_sample(in.c, t0, in.dim);
        Json j;
        j["theta"] = t0;
        j["dim"] = in.dim;
        j["trials"] = oracle_trials;
        j["seed"] = oracle_seed;
        j["incompressible"] = to_json(dissipation_quadratic_min(s, in.dim, false, oracle_trials, oracle_seed));
        j["compressible"] = to_json(dissipation_quadratic_min(s, in.dim, true, oracle_trials, oracle_seed));
        print_json(j);
        return 0;
      }
      const double t1 = std::isnan(theta_max) ? t0 : theta_max;
      if (t1 < t0) throw Error(ErrorCode::Config, "--theta-max is below --theta");
      const int n = std::isnan(theta_max) ? 1 : samples;
      Json reports = Json::array();
      for (int i = 0; i < n; ++i) {
        const double th = linspace(t0, t1, i, n);
        AdmissibilityReport r =
            check_admissibility(viscosity_sample(in.c, th, in.dim), in.dim, oracle_trials, oracle_seed);
        r.theta = th;
        reports.push_back(to_json(r));
      }
      Json j;
      j["dim"] = in.dim;
      j["theta_ref"] = in.c.theta_ref;
      j["ellipticity"] = in.dim <= 3 ? to_json(check_ellipticity(in.c, in.dim, 1e-8, t0, t1)) : Json();
      j["reports"] = reports;
      print_json(j);
      return 0;
    }
    if (*audit_cmd) {
      print_json(besov_audit(audit));
      return 0;
    }
    if (*conv_cmd) {
      const CoefficientSet c =
          conv_config.empty() ? isotropic_coefficients(conv.dim) : load_coefficients(conv_config, conv.dim).c;
      Json rows = Json::array();
      for (const auto& r : convergence_study(c, conv))
        rows.push_back({{"study", r.study}, {"parameter", r.parameter}, {"error", r.error}, {"order", r.order}});
      Json j;
      j["dim"] = conv.dim;
      j["levels"] = conv.levels;
      j["rows"] = rows;
      print_json(j);
      return 0;
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << error_label(e.code()) << ": " << msg << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: internal: " << msg << '\n';
    return 4;
  }
  return 0;
}

}  // namespace nematic::app
