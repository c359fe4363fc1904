#include <algorithm>
#include <cmath>

#include "criteria.hpp"
#include "nematic/admissibility.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/solver.hpp"
#include "support.hpp"

namespace acceptance {

namespace {

struct RunStats {
  double worst_production = 0.0;   // min over steps of min theta Delta* / max theta Delta*
  double worst_entropy_step = 0.0;  // most negative per-step change of the total entropy
  double max_drift = 0.0;          // max |E(t) - E(0)| / E(0)
  double final_drift = 0.0;
  std::size_t steps = 0;
};

RunStats simulate(const nematic::SimState& s0, const nematic::CoefficientSet& c, double dt, std::size_t steps) {
  nematic::SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = dt * static_cast<double>(steps);
  cfg.constraint_tol = 1e-6;
  RunStats r;
  r.worst_production = 1.0;
  r.worst_entropy_step = 0.0;
  const double e0 = nematic::total_energy(s0, c);
  double eta = nematic::total_entropy(s0, c);
  nematic::run(s0, c, cfg, [&](std::size_t k, const nematic::SimState& s, const nematic::StepReport&) {
    if (k == 0) return;
    const auto audit = nematic::second_law_audit(s, c);
    if (audit.max_production > 0.0)
      r.worst_production = std::min(r.worst_production, audit.min_production / audit.max_production);
    else if (audit.min_production < 0.0)
      r.worst_production = -1.0;
    const double next = nematic::total_entropy(s, c);
    r.worst_entropy_step = std::min(r.worst_entropy_step, next - eta);
    eta = next;
    r.final_drift = std::abs(nematic::total_energy(s, c) - e0) / e0;
    r.max_drift = std::max(r.max_drift, r.final_drift);
    r.steps = k;
  });
  return r;
}

}  // namespace

Outcome thermodynamic_consistency(const std::vector<int>& dims) {
  Outcome out;
  for (int d : dims) {
    const auto grid = nematic::Grid::make(d, std::vector<int>(d, d == 2 ? 64 : 32));
    const nematic::CoefficientSet c = support::admissible_coefficients(d);
    const auto report = nematic::check_admissibility(nematic::viscosity_sample(c, c.theta_ref, d), d, 10000);
    out.check(report.heat_ok && report.incompressible_ok, fmt("%dD: coefficient set is admissible", d));
    const nematic::SimState s0 = nematic::random_small(grid, c, 1e-2, 2024);

    const double dt = 1e-3;
    const RunStats fine = simulate(s0, c, dt, 1000);
    const RunStats coarse = simulate(s0, c, 2 * dt, 500);
    out.check(fine.steps == 1000, fmt("%dD: %zu steps completed at dt = %g", d, fine.steps, dt));
    out.check(fine.worst_production >= -1e-12,
              fmt("%dD: min theta Delta* / max theta Delta* = %.3e >= -1e-12", d, fine.worst_production));
    out.check(fine.worst_entropy_step >= -1e-10,
              fmt("%dD: most negative per-step entropy change %.3e >= -1e-10", d, fine.worst_entropy_step));
    out.check(fine.max_drift <= 1e-5, fmt("%dD: relative energy drift %.3e <= 1e-5", d, fine.max_drift));
    const double ratio = coarse.final_drift / fine.final_drift;
    out.check(ratio > 1.7 && ratio < 2.3,
              fmt("%dD: energy drift %.3e at dt = %g vs %.3e at dt = %g, ratio %.3f in (1.7, 2.3)", d,
                  coarse.final_drift, 2 * dt, fine.final_drift, dt, ratio));
  }
  return out;
}

}  // namespace acceptance
