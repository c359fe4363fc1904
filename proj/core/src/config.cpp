#include "nematic/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nematic/admissibility.hpp"
#include "nematic/error.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/keyvalue.hpp"

namespace nematic {

namespace {

void reject_unknown(const kv::Document& doc, const kv::Section& s, const std::vector<std::string>& known) {
  for (const auto& e : s.entries)
    if (std::find(known.begin(), known.end(), e.key) == known.end())
      kv::fail(doc, e, "unknown key in [" + s.name + "]");
}

GridPtr read_grid(const kv::Document& doc, const kv::Section& s) {
  reject_unknown(doc, s, {"dim", "resolution", "period"});
  const kv::Entry* de = s.find("dim");
  if (!de) kv::fail(doc, s.line, "[grid] needs 'dim'");
  const long dim = kv::to_integer(doc, *de);
  if (dim != 2 && dim != 3) kv::fail(doc, *de, "dim must be 2 or 3");
  const kv::Entry* re = s.find("resolution");
  if (!re) kv::fail(doc, s.line, "[grid] needs 'resolution'");
  std::vector<int> res;
  if (re->value.find('[') == std::string::npos) {
    res.assign(dim, static_cast<int>(kv::to_integer(doc, *re)));
  } else {
    for (double v : kv::to_real_list(doc, *re)) {
      if (v != std::floor(v)) kv::fail(doc, *re, "resolution entries must be integers");
      res.push_back(static_cast<int>(v));
    }
  }
  if (static_cast<long>(res.size()) != dim) kv::fail(doc, *re, "resolution needs one entry per axis");
  std::vector<double> period;
  if (const kv::Entry* pe = s.find("period")) {
    period = kv::to_real_list(doc, *pe);
    if (static_cast<long>(period.size()) != dim) kv::fail(doc, *pe, "period needs one entry per axis");
  }
  try {
    return Grid::make(static_cast<int>(dim), res, period);
  } catch (const Error& e) {
    kv::fail(doc, *re, e.what());
  }
}

FourierMode read_mode(const kv::Document& doc, const kv::Entry& e, int dim, bool vector) {
  const auto v = kv::to_real_list(doc, e);
  const std::size_t want = static_cast<std::size_t>(dim + 2 + (vector ? 1 : 0));
  if (v.size() != want)
    kv::fail(doc, e,
             std::string("mode needs ") + (vector ? "[component, " : "[") + (dim == 2 ? "k0, k1" : "k0, k1, k2") +
                 ", amplitude, phase]");
  FourierMode m;
  std::size_t i = 0;
  if (vector) {
    if (v[0] != std::floor(v[0])) kv::fail(doc, e, "component must be an integer");
    m.component = static_cast<int>(v[i++]);
  }
  for (int a = 0; a < dim; ++a, ++i) {
    if (v[i] != std::floor(v[i])) kv::fail(doc, e, "wavenumbers must be integers");
    m.k[a] = static_cast<int>(v[i]);
  }
  m.amplitude = v[i++];
  m.phase = v[i];
  return m;
}

SimState read_initial(const kv::Document& doc, const kv::Section* s, const GridPtr& grid, const CoefficientSet& c,
                      std::uint64_t seed, std::string& description) {
  if (!s) {
    description = "equilibrium";
    return equilibrium_state(grid, c);
  }
  reject_unknown(doc, *s, {"preset", "epsilon", "seed", "kmax", "u_mode", "n_mode", "theta_mode"});
  std::string preset = "equilibrium";
  if (const auto* e = s->find("preset")) preset = e->value;
  double eps = 1e-2;
  if (const auto* e = s->find("epsilon")) eps = kv::to_real(doc, *e);
  if (const auto* e = s->find("seed")) seed = static_cast<std::uint64_t>(kv::to_integer(doc, *e));
  int kmax = 4;
  if (const auto* e = s->find("kmax")) kmax = static_cast<int>(kv::to_integer(doc, *e));
  const int d = grid->dim();
  const bool has_modes = s->find("u_mode") || s->find("n_mode") || s->find("theta_mode");
  if (has_modes && preset != "modes") kv::fail(doc, s->line, "mode entries need preset = modes");
  description = preset;
  try {
    if (preset == "equilibrium") return equilibrium_state(grid, c);
    if (preset == "shear-twist") return shear_twist(grid, c, eps);
    if (preset == "hot-spot") return hot_spot(grid, c, eps);
    if (preset == "random-small") return random_small(grid, c, eps, seed, kmax);
    if (preset == "modes") {
      ModeList ml;
      for (const auto* e : s->find_all("u_mode")) ml.u.push_back(read_mode(doc, *e, d, true));
      for (const auto* e : s->find_all("n_mode")) ml.n.push_back(read_mode(doc, *e, d, true));
      for (const auto* e : s->find_all("theta_mode")) ml.theta.push_back(read_mode(doc, *e, d, false));
      return state_from_modes(grid, c, ml);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) kv::fail(doc, s->line, e.what());
    throw;
  }
  kv::fail(doc, *s->find("preset"), "unknown preset '" + preset + "'");
}

SolverConfig read_solver(const kv::Document& doc, const kv::Section* s) {
  SolverConfig cfg;
  if (!s) return cfg;
  reject_unknown(doc, *s,
                 {"dt", "t_end", "scheme", "subsystem", "picard_max_iters", "picard_tol", "renormalize_director",
                  "snapshot_stride", "diagnostics_stride", "seed", "theta_min", "gamma_min", "constraint_tol"});
  if (const auto* e = s->find("dt")) cfg.dt = kv::to_real(doc, *e);
  if (const auto* e = s->find("t_end")) cfg.t_end = kv::to_real(doc, *e);
  if (const auto* e = s->find("scheme")) {
    if (e->value == "imex1")
      cfg.scheme = Scheme::Imex1;
    else if (e->value == "picard")
      cfg.scheme = Scheme::Picard;
    else
      kv::fail(doc, *e, "scheme must be imex1 or picard");
  }
  if (const auto* e = s->find("subsystem")) {
    if (e->value == "full")
      cfg.subsystem = Subsystem::Full;
    else if (e->value == "stokes")
      cfg.subsystem = Subsystem::Stokes;
    else if (e->value == "heat")
      cfg.subsystem = Subsystem::Heat;
    else
      kv::fail(doc, *e, "subsystem must be full, stokes or heat");
  }
  if (const auto* e = s->find("picard_max_iters")) cfg.picard_max_iters = static_cast<int>(kv::to_integer(doc, *e));
  if (const auto* e = s->find("picard_tol")) cfg.picard_tol = kv::to_real(doc, *e);
  if (const auto* e = s->find("renormalize_director")) cfg.renormalize_director = kv::to_bool(doc, *e);
  if (const auto* e = s->find("snapshot_stride")) cfg.snapshot_stride = static_cast<int>(kv::to_integer(doc, *e));
  if (const auto* e = s->find("diagnostics_stride"))
    cfg.diagnostics_stride = static_cast<int>(kv::to_integer(doc, *e));
  if (const auto* e = s->find("seed")) cfg.seed = static_cast<std::uint64_t>(kv::to_integer(doc, *e));
  if (const auto* e = s->find("theta_min")) cfg.theta_min = kv::to_real(doc, *e);
  if (const auto* e = s->find("gamma_min")) cfg.gamma_min = kv::to_real(doc, *e);
  if (const auto* e = s->find("constraint_tol")) cfg.constraint_tol = kv::to_real(doc, *e);
  try {
    cfg.validate();
  } catch (const Error& e) {
    kv::fail(doc, s->line, e.what());
  }
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source,
                            std::optional<std::uint64_t> seed_override) {
  const kv::Document doc = kv::parse(text, source);
  for (const auto& s : doc.sections)
    if (s.name != "grid" && s.name != "coefficients" && s.name != "initial-data" && s.name != "solver")
      kv::fail(doc, s.line, "unknown section [" + s.name + "]");
  const kv::Section* gs = doc.find("grid");
  if (!gs) kv::fail(doc, 1, "missing [grid] section");
  const kv::Section* cs = doc.find("coefficients");
  if (!cs) kv::fail(doc, 1, "missing [coefficients] section");

  RunConfig rc;
  rc.text = text;
  rc.grid = read_grid(doc, *gs);
  rc.coefficients = coefficients_from_section(doc, *cs, rc.grid->dim());
  rc.solver = read_solver(doc, doc.find("solver"));
  if (seed_override) rc.solver.seed = *seed_override;
  const kv::Section* is = doc.find("initial-data");
  std::uint64_t seed = rc.solver.seed;
  if (!seed_override && is && is->find("seed")) seed = static_cast<std::uint64_t>(kv::to_integer(doc, *is->find("seed")));
  rc.initial = read_initial(doc, is, rc.grid, rc.coefficients, seed, rc.initial_description);

  const auto [lo, hi] = std::minmax_element(rc.initial.theta.values().begin(), rc.initial.theta.values().end());
  const EllipticityReport er = check_ellipticity(rc.coefficients, rc.grid->dim(), rc.solver.gamma_min,
                                                 std::min(*lo, rc.coefficients.theta_ref),
                                                 std::max(*hi, rc.coefficients.theta_ref));
  if (!er.ok) {
    std::string msg;
    for (const auto& f : er.failures) msg += (msg.empty() ? "" : "; ") + f;
    throw Error(ErrorCode::Ellipticity, source + ":" + std::to_string(cs->line) + ": [coefficients]: " + msg);
  }
  const double floor = rc.solver.theta_min > 0.0 ? rc.solver.theta_min : rc.coefficients.theta_ref / 10.0;
  if (!(*lo > floor)) throw Error(ErrorCode::Config, source + ": initial temperature below the floor");

  const AdmissibilityReport ar =
      check_admissibility(viscosity_sample(rc.coefficients, rc.coefficients.theta_ref, rc.grid->dim()),
                          rc.grid->dim(), 0);
  if (!ar.heat_ok) rc.warnings.push_back("heat conduction inadmissible at theta_ref");
  if (!ar.incompressible_ok) rc.warnings.push_back("viscous dissipation inadmissible at theta_ref");
  return rc;
}

RunConfig parse_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path, seed_override);
}

}  // namespace nematic
