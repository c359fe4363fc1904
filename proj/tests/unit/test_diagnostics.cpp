#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nematic/admissibility.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/error.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/solver.hpp"
#include "support.hpp"

using namespace nematic;

namespace {

constexpr double pi = std::numbers::pi;

CoefficientSet admissible(int dim) {
  CoefficientSet c = isotropic_coefficients(dim, 1.0, 1.0, 1.0, 1.0);
  c.K[0] = Polynomial{1.0, 0.3};
  c.lambda1 = Polynomial{1.0, 0.2};
  c.lambda2 = Polynomial{0.3};
  c.alpha[1] = Polynomial{0.2};
  c.alpha[5] = Polynomial{0.3};
  c.alpha[6] = Polynomial{0.1};
  return c;
}

std::vector<SimState> heat_trajectory(const GridPtr& g, const CoefficientSet& c, double a, double dt, double T) {
  SimState s = equilibrium_state(g, c);
  s.theta += ScalarField::from_function(g, [&](const Point& x) { return a * std::cos(x[0]); });
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = T;
  cfg.subsystem = Subsystem::Heat;
  std::vector<SimState> out;
  run(s, c, cfg, [&](std::size_t, const SimState& st, const StepReport&) { out.push_back(st); });
  return out;
}

/// int over [0, 2pi]^2 of ln(1 + a cos x).
double log_integral(double a) { return 4 * pi * pi * std::log((1 + std::sqrt(1 - a * a)) / 2); }

}  // namespace

TEST(FirstLaw, EquilibriumResidualVanishes) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = admissible(2);
  SimState a = equilibrium_state(g, c), b = a;
  b.t = 0.1;
  EXPECT_EQ(max_abs(first_law_residual(a, b, c)), 0.0);
  EXPECT_THROW(first_law_residual(b, a, c), Error);
}

TEST(FirstLaw, HeatRunConservesEnergy) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = isotropic_coefficients(2);
  const auto traj = heat_trajectory(g, c, 0.1, 0.01, 0.2);
  const double e0 = total_energy(traj.front(), c);
  EXPECT_LT(std::abs(total_energy(traj.back(), c) - e0), 1e-13 * e0);
  // backward Euler on the heat equation balances the discrete first law exactly
  EXPECT_LT(max_abs(first_law_residual(traj[traj.size() - 2], traj.back(), c, Subsystem::Heat)), 1e-10);
}

TEST(FirstLaw, ResidualShrinksLinearlyWithDt) {
  const auto g = Grid::make(2, {32, 32});
  const CoefficientSet c = admissible(2);
  const SimState s0 = random_small(g, c, 0.05, 2, 3);
  std::vector<double> residual;
  for (double dt : {0.004, 0.002, 0.001}) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.02;
    cfg.constraint_tol = 1e-4;
    SimState prev = s0, last = s0;
    run(s0, c, cfg, [&](std::size_t, const SimState& s, const StepReport&) {
      prev = last;
      last = s;
    });
    residual.push_back(l2_norm(first_law_residual(prev, last, c)));
  }
  for (std::size_t i = 1; i < residual.size(); ++i) {
    const double ratio = residual[i - 1] / residual[i];
    EXPECT_GT(ratio, 1.6) << i;
    EXPECT_LT(ratio, 2.4) << i;
  }
}

TEST(SecondLaw, NoFlowIsothermalStateHasZeroProduction) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = admissible(2);
  const auto r = second_law_audit(equilibrium_state(g, c), c);
  EXPECT_EQ(r.min_production, 0.0);
  EXPECT_EQ(r.max_production, 0.0);
  EXPECT_EQ(r.integral, 0.0);
}

TEST(SecondLaw, AdmissibleRandomStatesProduceEntropy) {
  for (int dim : {2, 3}) {
    const auto g = dim == 2 ? Grid::make(2, {32, 32}) : Grid::make(3, {16, 16, 16});
    const CoefficientSet c = admissible(dim);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const SimState s = random_small(g, c, 0.1, seed, 3);
      const auto r = second_law_audit(s, c);
      EXPECT_GE(r.min_production, -1e-12 * r.max_production);
      EXPECT_GT(r.integral, 0.0);
      EXPECT_GE(r.mechanical_min, -1e-12 * r.max_production);
      EXPECT_GE(r.thermal_min, -1e-12 * r.max_production);
      EXPECT_LE(r.identity_gap, 1e-10 * std::max(1.0, r.max_production));
    }
  }
}

TEST(SecondLaw, InadmissibleArgminStateProducesNegativeEntropy) {
  // alpha2 = 1, alpha3 = 0: gamma1 = -1
  CoefficientSet c;
  c.alpha[2] = Polynomial{1.0};
  c.alpha[4] = Polynomial{1.0};
  c.lambda1 = Polynomial{1.0};
  c.K[0] = Polynomial{1.0};
  ViscositySample vs = viscosity_sample(c, 1.0, 3);
  const OracleResult o = dissipation_quadratic_min(vs, 3, false, 2000);
  ASSERT_LT(o.min_value, 0.0);

  const auto g = Grid::make(3, {16, 16, 16});
  SimState s;
  s.t = 0.0;
  s.theta = ScalarField(g, 1.0);
  s.p = ScalarField(g);
  s.n = VectorField(g);
  s.u = VectorField(g);
  VectorField N(g);
  for (std::size_t p = 0; p < g->size(); ++p) {
    const Point x = g->position(p);
    s.n.set(p, {o.n[0], o.n[1], o.n[2]});
    N.set(p, {o.N[0], o.N[1], o.N[2]});
    Point u{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) u[i] += o.D(i, j) * std::sin(x[j]);
    s.u.set(p, u);
  }
  const auto r = second_law_audit(s, N, c);
  EXPECT_LT(r.min_production, 0.0);
  EXPECT_LT(r.mechanical_min, 0.0);
}

TEST(EntropyBalance, EquilibriumIsConstant) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = admissible(2);
  std::vector<SimState> traj(3, equilibrium_state(g, c));
  for (std::size_t k = 0; k < 3; ++k) traj[k].t = 0.1 * k;
  for (const auto& e : entropy_balance(traj, c)) {
    EXPECT_EQ(e.change, 0.0);
    EXPECT_EQ(e.gap, 0.0);
  }
}

TEST(EntropyBalance, HeatModeMatchesClosedFormRise) {
  // theta = 1 + a e^{-t} cos x with isotropic unit conduction; int eta = V + int ln theta
  const auto g = Grid::make(2, {32, 32});
  const CoefficientSet c = isotropic_coefficients(2);
  const double a = 0.2, T = 0.2;
  const double exact = log_integral(a * std::exp(-T)) - log_integral(a);
  ASSERT_GT(exact, 0.0);
  std::vector<double> errors;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto traj = heat_trajectory(g, c, a, dt, T);
    const auto bal = entropy_balance(traj, c, Subsystem::Heat);
    double change = 0.0, production = 0.0;
    for (const auto& e : bal) {
      change += e.change;
      production += e.production;
      EXPECT_GE(e.change, -1e-10);
    }
    EXPECT_NEAR(bal.front().entropy, 4 * pi * pi + log_integral(a), 1e-12);
    errors.push_back(std::abs(change - exact));
    EXPECT_LT(std::abs(production - change), 0.2 * change);
  }
  EXPECT_GT(errors[0] / errors[1], 1.6);
  EXPECT_GT(errors[1] / errors[2], 1.6);
}

TEST(EntropyBalance, ReversedReplayDecreases) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = isotropic_coefficients(2);
  auto traj = heat_trajectory(g, c, 0.2, 0.01, 0.05);
  std::vector<SimState> rev(traj.rbegin(), traj.rend());
  for (std::size_t k = 0; k < rev.size(); ++k) rev[k].t = traj[k].t;
  const auto bal = entropy_balance(rev, c, Subsystem::Heat);
  for (std::size_t k = 1; k < bal.size(); ++k) EXPECT_LT(bal[k].change, 0.0);
}

TEST(Diagnose, RecordAtEquilibrium) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = admissible(2);
  const SimState s = equilibrium_state(g, c);
  const auto r = diagnose(3, s, nullptr, c, StepReport{});
  EXPECT_EQ(r.step, 3u);
  EXPECT_NEAR(r.total_energy, 4 * pi * pi * (1.0 + 0.0), 1e-12);
  EXPECT_NEAR(r.total_entropy, 4 * pi * pi, 1e-12);
  EXPECT_EQ(r.kinetic_energy, 0.0);
  EXPECT_EQ(r.constraint_violation, 0.0);
  EXPECT_EQ(r.first_law_residual_norm, 0.0);
  EXPECT_EQ(r.min_theta, 1.0);
  EXPECT_EQ(r.max_theta, 1.0);
}

TEST(Diagnose, KineticEnergyAndDivergence) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = admissible(2);
  SimState s = equilibrium_state(g, c);
  s.u[0] = ScalarField::from_function(g, [](const Point& x) { return 0.1 * std::cos(x[1]); });
  const auto r = diagnose(0, s, nullptr, c, StepReport{});
  // int 0.005 cos^2 = 0.005 * 2 pi^2
  EXPECT_NEAR(r.kinetic_energy, 0.01 * pi * pi, 1e-14);
  EXPECT_LT(r.max_div_u, 1e-15);
}

TEST(Csv, HeaderAndRowHaveSameFieldCount) {
  const std::string& h = csv_header();
  EXPECT_EQ(h.rfind("step,t,total_energy,total_entropy", 0), 0u);
  DiagnosticsRecord r;
  r.step = 7;
  r.t = 0.125;
  std::ostringstream os;
  write_csv_row(os, r);
  const std::string row = os.str();
  EXPECT_EQ(std::count(h.begin(), h.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(row.rfind("7,0.125,", 0), 0u);
}
