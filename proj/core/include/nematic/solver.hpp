#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nematic/admissibility.hpp"
#include "nematic/coefficients.hpp"
#include "nematic/grid.hpp"
#include "nematic/state.hpp"

namespace nematic {

enum class Scheme { Imex1, Picard };

/// Which equations evolve. `Stokes` freezes n and theta and drops the elastic
/// stress and advection; `Heat` freezes u and n.
enum class Subsystem { Full, Stokes, Heat };

const char* scheme_name(Scheme s);
const char* subsystem_name(Subsystem s);

/// Time-independent sources added to d_t u, d_t n and d_t theta.
struct Forcing {
  VectorField u;
  VectorField n;
  ScalarField theta;
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1e-2;
  Scheme scheme = Scheme::Imex1;
  Subsystem subsystem = Subsystem::Full;
  int picard_max_iters = 50;
  double picard_tol = 1e-12;
  bool renormalize_director = true;
  int snapshot_stride = 0;  // 0 disables snapshots
  int diagnostics_stride = 1;
  std::uint64_t seed = 0;
  double theta_min = 0.0;  // 0 selects theta_ref / 10
  double gamma_min = 1e-8;
  double constraint_tol = 1e-8;  // largest accepted | |n|^2 - 1 | before renormalization
  std::shared_ptr<const Forcing> forcing;

  void validate() const;
  std::size_t step_count() const;
};

struct EllipticityReport {
  bool ok = false;
  /// Literal conditions on the reference constants, each "lhs > 0".
  std::vector<Margin> literal;
  /// Coercivity constants lambda0 measured on the assembled symbols over sampled
  /// directions: -lambda_max(sym(symbol(xi))) / |xi|^2.
  double lambda0_momentum = 0.0;
  double lambda0_heat = 0.0;
  double lambda0_director = 0.0;          // operator actually integrated
  double lambda0_director_literal = 0.0;  // K1 Lap + (K2+K4)(Id + n n) grad div + K3 div[(n.grad n) n]
  double gamma1_min = 0.0;                // over the temperature band
  std::vector<std::string> failures;
};

/// Literal conditions plus numeric symbol checks; gamma1 is sampled over [theta_lo, theta_hi].
EllipticityReport check_ellipticity(const CoefficientSet& c, int dim, double gamma_min, double theta_lo,
                                    double theta_hi);

/// Per-mode linearization at (0, n_ref, theta_ref). The velocity-director block
/// is a dense 2d x 2d matrix per mode, the temperature symbol a scalar.
class LinearOperators {
public:
  LinearOperators(GridPtr grid, const CoefficientSet& c, Subsystem subsystem);

  const GridPtr& grid() const { return grid_; }
  int block() const { return 2 * grid_->dim(); }
  /// Real block acting on (v, m) with u_hat = i v_hat.
  const double* flow_block(std::size_t k) const { return &flow_[k * block() * block()]; }
  double heat_symbol(std::size_t k) const { return heat_[k]; }

  /// y is ordered u_0..u_{d-1}, n_0..n_{d-1}, theta (spectra of the perturbation).
  std::vector<Spectrum> apply(const std::vector<Spectrum>& y) const;
  /// Solves (I - dt L) x = rhs in place.
  void solve(double dt, std::vector<Spectrum>& rhs) const;

private:
  void factor(double dt) const;

  GridPtr grid_;
  std::vector<double> flow_;
  std::vector<double> heat_;
  mutable double factored_dt_ = -1.0;
  mutable std::vector<double> inverse_;
};

/// Kinematic and constitutive fields of a state together with its raw rates.
struct StateAnalysis {
  TensorField grad_u, grad_n, D, Omega;
  VectorField grad_theta;
  VectorField N;       // co-rotational flux from the director law
  VectorField n_dot;   // material derivative of n
  VectorField du, dn;  // d_t u (projected), d_t n
  ScalarField dtheta;  // d_t theta
  ScalarField pressure;
  ScalarField heat_capacity;  // 1 - theta d2W/dtheta2
};

/// Evaluates the exact rates of the chosen subsystem at a state (forcing excluded).
StateAnalysis analyze(const SimState& s, const CoefficientSet& c, Subsystem subsystem = Subsystem::Full,
                      double gamma_min = 1e-8);

struct Residual {
  VectorField u, n;
  ScalarField theta;
};

struct StepReport {
  double constraint_drift = 0.0;  // max | |n|^2 - 1 | before renormalization
  int picard_iterations = 0;
  std::vector<double> picard_differences;
};

/// Owns the factored implicit operators for one configuration.
class Integrator {
public:
  Integrator(GridPtr grid, CoefficientSet c, SolverConfig cfg);

  const LinearOperators& operators() const { return ops_; }
  const SolverConfig& config() const { return cfg_; }
  const CoefficientSet& coefficients() const { return c_; }
  double theta_floor() const;

  /// Rates after 2/3 filtering of everything beyond the linear part; the
  /// director rate is projected onto the tangent space of the unit sphere.
  std::vector<Spectrum> rates(const SimState& s, ScalarField* pressure = nullptr) const;
  /// Filtered rate minus the linear part.
  Residual residual(const SimState& s) const;

  SimState step(const SimState& s, StepReport* report = nullptr) const;
  SimState step_imex(const SimState& s, StepReport* report = nullptr) const;
  SimState step_picard(const SimState& s, StepReport* report = nullptr) const;

  std::vector<Spectrum> to_spectra(const SimState& s) const;
  SimState from_spectra(const std::vector<Spectrum>& y, double t) const;

private:
  SimState finish(SimState s, StepReport* report) const;

  GridPtr grid_;
  CoefficientSet c_;
  SolverConfig cfg_;
  LinearOperators ops_;
};

Residual rhs_nonlinear(const SimState& s, const CoefficientSet& c, Subsystem subsystem = Subsystem::Full);
SimState step_imex(const SimState& s, double dt, const CoefficientSet& c);
SimState step_picard(const SimState& s, double dt, const CoefficientSet& c, const SolverConfig& cfg,
                     StepReport* report = nullptr);

struct Renormalized {
  VectorField n;
  double max_deviation = 0.0;  // max | |n|^2 - 1 | of the input
};
Renormalized renormalize_director(const VectorField& n);

using StepObserver = std::function<void(std::size_t step, const SimState& state, const StepReport& report)>;

struct RunResult {
  SimState final_state;
  std::size_t steps = 0;
  std::vector<StepReport> reports;
};

/// Validates ellipticity, then steps to t_end calling the observer after every
/// step (and once for the initial state with step 0).
RunResult run(const SimState& initial, const CoefficientSet& c, const SolverConfig& cfg,
              const StepObserver& observer = {});

/// Sources that make `exact` a stationary solution: minus its rates, evaluated
/// on a grid refined by `refine` and truncated back.
std::shared_ptr<const Forcing> stationary_forcing(const SimState& exact, const CoefficientSet& c,
                                                  Subsystem subsystem = Subsystem::Full, int refine = 2);

}  // namespace nematic
