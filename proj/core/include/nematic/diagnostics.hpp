#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nematic/coefficients.hpp"
#include "nematic/grid.hpp"
#include "nematic/solver.hpp"
#include "nematic/state.hpp"

namespace nematic {

/// Pointwise d_t e_tot - div Sigma - div q at `next`, with d_t e_tot the
/// backward difference (e_tot(next) - e_tot(prev)) / (next.t - prev.t).
ScalarField first_law_residual(const SimState& prev, const SimState& next, const CoefficientSet& c,
                               Subsystem subsystem = Subsystem::Full);

struct SecondLawAudit {
  double min_production = 0.0;  // min theta Delta*
  double max_production = 0.0;
  double integral = 0.0;        // int Delta* = int theta Delta* / theta
  double mechanical_min = 0.0;  // min sigma^L : D + g . N
  double thermal_min = 0.0;     // min q . grad theta / theta
  double identity_gap = 0.0;    // max |g . N - gamma1 |N|^2 - gamma2 N . Dn|
};

/// N from the director law of the subsystem.
SecondLawAudit second_law_audit(const SimState& s, const CoefficientSet& c, Subsystem subsystem = Subsystem::Full);
/// N supplied by the caller.
SecondLawAudit second_law_audit(const SimState& s, const VectorField& N, const CoefficientSet& c);

struct EntropyStep {
  double t = 0.0;
  double entropy = 0.0;     // int eta at t
  double change = 0.0;      // int eta(t) - int eta(t_prev)
  double production = 0.0;  // int Delta*(t) (t - t_prev)
  double gap = 0.0;         // |change - production|
};

/// Per-step entropy bookkeeping; the first entry has zero change and gap.
std::vector<EntropyStep> entropy_balance(const std::vector<SimState>& trajectory, const CoefficientSet& c,
                                         Subsystem subsystem = Subsystem::Full);

double total_entropy(const SimState& s, const CoefficientSet& c);
double total_energy(const SimState& s, const CoefficientSet& c);

struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double total_energy = 0.0;
  double total_entropy = 0.0;
  double entropy_production_integral = 0.0;
  double min_pointwise_production = 0.0;
  double max_pointwise_production = 0.0;
  double mechanical_min = 0.0;
  double thermal_min = 0.0;
  double constraint_violation = 0.0;
  double constraint_drift = 0.0;  // before renormalization, from the step
  double first_law_residual_norm = 0.0;
  double dissipation_identity_gap = 0.0;
  double kinetic_energy = 0.0;
  double max_div_u = 0.0;
  double min_theta = 0.0;
  double max_theta = 0.0;
  int picard_iterations = 0;
};

/// All diagnostics at `s`; the first-law residual needs the previous state.
DiagnosticsRecord diagnose(std::size_t step, const SimState& s, const SimState* prev, const CoefficientSet& c,
                           const StepReport& report, Subsystem subsystem = Subsystem::Full);

/// Fixed CSV header, no trailing newline.
const std::string& csv_header();
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);

}  // namespace nematic
