#include <algorithm>
#include <cmath>
#include <functional>

#include "criteria.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/solver.hpp"
#include "support.hpp"

namespace acceptance {

namespace {

using nematic::Point;

constexpr double kHorizon = 0.2;

struct ModeErrors {
  double continuous = 0.0;  // against exp(-rate t)
  double discrete = 0.0;    // against the backward Euler factor (1 + rate dt)^(-steps)
};

/// Max deviations of `computed` from exact(x, decay), where decay(rate) is the
/// time factor of a mode decaying at that rate.
template <class Exact>
ModeErrors compare(const nematic::ScalarField& computed, const Exact& exact, double dt, std::size_t steps) {
  const double t = dt * static_cast<double>(steps);
  ModeErrors e;
  const auto cont = nematic::ScalarField::from_function(
      computed.grid(), [&](const Point& x) { return exact(x, [&](double r) { return std::exp(-r * t); }); });
  const auto disc = nematic::ScalarField::from_function(computed.grid(), [&](const Point& x) {
    return exact(x, [&](double r) { return std::pow(1.0 + r * dt, -static_cast<double>(steps)); });
  });
  for (std::size_t p = 0; p < computed.size(); ++p) {
    e.continuous = std::max(e.continuous, std::abs(computed[p] - cont[p]));
    e.discrete = std::max(e.discrete, std::abs(computed[p] - disc[p]));
  }
  return e;
}

using Decay = std::function<double(double)>;

/// theta = theta_ref + sum_j a_j cos(k_j . x + phase_j) under constant anisotropic conduction.
ModeErrors heat_run(int d, double dt) {
  const auto grid = nematic::Grid::make(d, std::vector<int>(d, 32));
  nematic::CoefficientSet c = nematic::isotropic_coefficients(d, 1.0, 1.0, 0.8, 1.0);
  c.lambda2 = nematic::Polynomial{0.5};
  c.n_ref = d == 2 ? Point{std::cos(0.3), std::sin(0.3), 0.0} : Point{0.6, 0.0, 0.8};
  struct Mode {
    std::array<int, 3> k;
    double a, phase;
  };
  const std::vector<Mode> modes{
      {{1, 2, d == 3 ? 1 : 0}, 0.05, 0.3}, {{3, -1, 0}, 0.02, -1.1}, {{0, 1, d == 3 ? 2 : 0}, 0.03, 0.0}};
  auto rate = [&](const Mode& m) {
    double k2 = 0.0, nk = 0.0;
    for (int a = 0; a < d; ++a) {
      k2 += m.k[a] * m.k[a];
      nk += c.n_ref[a] * m.k[a];
    }
    return 0.8 * k2 + 0.5 * nk * nk;
  };
  auto exact = [&](const Point& x, const Decay& decay) {
    double v = c.theta_ref;
    for (const auto& m : modes) {
      double arg = m.phase;
      for (int a = 0; a < d; ++a) arg += m.k[a] * x[a];
      v += m.a * decay(rate(m)) * std::cos(arg);
    }
    return v;
  };
  nematic::SimState s = nematic::equilibrium_state(grid, c);
  s.theta = nematic::ScalarField::from_function(
      grid, [&](const Point& x) { return exact(x, [](double) { return 1.0; }); });
  nematic::SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = kHorizon;
  cfg.subsystem = nematic::Subsystem::Heat;
  const auto r = nematic::run(s, c, cfg);
  return compare(r.final_state.theta, exact, dt, r.steps);
}

/// u = (a1 cos y + a2 sin 2y) e_x with n_ref = e_z: D n and Omega n vanish, so
/// the Leslie stress reduces to alpha4 D and each mode decays at alpha4 k^2 / 2.
ModeErrors stokes_run(double dt) {
  const auto grid = nematic::Grid::make(3, {32, 32, 32});
  nematic::CoefficientSet c = support::admissible_coefficients(3);
  c.n_ref = {0.0, 0.0, 1.0};
  const double alpha4 = c.at(c.theta_ref).alpha[4];
  auto exact = [&](const Point& x, const Decay& decay) {
    return 0.1 * decay(alpha4 / 2) * std::cos(x[1]) + 0.05 * decay(2 * alpha4) * std::sin(2 * x[1]);
  };
  nematic::SimState s = nematic::equilibrium_state(grid, c);
  s.u[0] = nematic::ScalarField::from_function(
      grid, [&](const Point& x) { return exact(x, [](double) { return 1.0; }); });
  nematic::SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = kHorizon;
  cfg.subsystem = nematic::Subsystem::Stokes;
  const auto r = nematic::run(s, c, cfg);
  ModeErrors e = compare(r.final_state.u[0], exact, dt, r.steps);
  for (int i : {1, 2}) e.discrete = std::max(e.discrete, nematic::max_abs(r.final_state.u[i]));
  return e;
}

void study(Outcome& out, const std::string& name, const std::function<ModeErrors(double)>& body) {
  std::vector<double> dts, errors;
  double spatial = 0.0;
  for (double dt : {0.02, 0.01, 0.005, 0.0025}) {
    const ModeErrors e = body(dt);
    dts.push_back(dt);
    errors.push_back(e.continuous);
    spatial = std::max(spatial, e.discrete);
    out.note(fmt("%s: dt = %g, error vs closed form %.3e", name.c_str(), dt, e.continuous));
  }
  const double order = observed_order(dts, errors);
  out.check(std::abs(order - 1.0) <= 0.1, fmt("%s: temporal order %.3f in [0.9, 1.1]", name.c_str(), order));
  out.check(spatial <= 1e-8,
            fmt("%s: spatial error vs the time-discrete closed form %.2e <= 1e-8", name.c_str(), spatial));
}

}  // namespace

Outcome exact_subsystems() {
  Outcome out;
  study(out, "heat 2D 32^2", [](double dt) { return heat_run(2, dt); });
  study(out, "heat 3D 32^3", [](double dt) { return heat_run(3, dt); });
  study(out, "Stokes 3D 32^3", stokes_run);
  return out;
}

}  // namespace acceptance
