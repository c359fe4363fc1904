#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nematic/besov.hpp"
#include "nematic/coefficients.hpp"
#include "nematic/error.hpp"
#include "nematic/initial_data.hpp"
#include "support.hpp"

using namespace nematic;
using testing_support::max_diff;
using testing_support::random_trig;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField mode(const GridPtr& g, int kx, int ky, double amp = 1.0) {
  return ScalarField::from_function(g, [=](const Point& x) { return amp * std::cos(kx * x[0] + ky * x[1]); });
}

ScalarField unit(ScalarField f) {
  f *= 1.0 / l2_norm(f);
  return f;
}

double inner(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid()->cell_volume();
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  ScalarField out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] *= b[i];
  return out;
}

}  // namespace

TEST(ShellIndex, Examples) {
  EXPECT_EQ(shell_index(1.0), 1);
  EXPECT_EQ(shell_index(2.0), 2);
  EXPECT_EQ(shell_index(3.99), 2);
  EXPECT_EQ(shell_index(8.0), 4);
  EXPECT_EQ(shell_index(std::sqrt(2.0)), 1);
  EXPECT_EQ(shell_index(0.5), 0);
}

TEST(Dyadic, SingleModeLandsInOneShell) {
  const auto g = Grid::make(2, {32, 32});
  const ScalarField f = mode(g, 2, 0);
  const auto dd = dyadic_decompose(f);
  EXPECT_LT(max_diff(dd.shell(2), f), 1e-14);
  for (int q = dd.q_min(); q <= dd.q_max(); ++q)
    if (q != 2) EXPECT_LT(max_abs(dd.shell(q)), 1e-14) << q;
  EXPECT_EQ(max_abs(dd.shell(99)), 0.0);

  const ScalarField two = mode(g, 1, 0) + mode(g, 0, 8);
  const auto d2 = dyadic_decompose(two);
  EXPECT_LT(max_diff(d2.shell(1), mode(g, 1, 0)), 1e-13);
  EXPECT_LT(max_diff(d2.shell(4), mode(g, 0, 8)), 1e-13);
}

TEST(Dyadic, ReconstructionOrthogonalityParseval) {
  std::mt19937_64 rng(41);
  for (int dim : {2, 3}) {
    const auto g = dim == 2 ? Grid::make(2, {32, 32}) : Grid::make(3, {16, 16, 16});
    for (int t = 0; t < 5; ++t) {
      ScalarField f = random_trig(g, rng, dim == 2 ? 10 : 5) + ScalarField(g, 0.7);
      const auto dd = dyadic_decompose(f);
      const ScalarField centred = f - ScalarField(g, mean(f));
      EXPECT_LT(max_diff(dd.reconstruct(), centred), 1e-12 * max_abs(centred));
      double energy = 0.0;
      for (int q = dd.q_min(); q <= dd.q_max(); ++q) {
        energy += inner(dd.shell(q), dd.shell(q));
        for (int r = q + 1; r <= dd.q_max(); ++r)
          EXPECT_LT(std::abs(inner(dd.shell(q), dd.shell(r))), 1e-11 * inner(centred, centred));
      }
      EXPECT_NEAR(energy, inner(centred, centred), 1e-11 * inner(centred, centred));
    }
  }
}

TEST(BesovNorm, Examples) {
  const auto g = Grid::make(2, {32, 32});
  for (double s : {-1.0, 0.0, 0.5, 2.0}) {
    EXPECT_NEAR(besov_norm(unit(mode(g, 1, 0)), s), std::pow(2.0, s), 1e-12 * std::pow(2.0, s)) << s;
    EXPECT_NEAR(besov_norm(unit(mode(g, 3, 3)), s), std::pow(2.0, 3 * s), 1e-12 * std::pow(2.0, 3 * s)) << s;
  }
  EXPECT_EQ(besov_norm(ScalarField(g), 1.0), 0.0);
  const ScalarField f = unit(mode(g, 1, 0)) + unit(mode(g, 0, 4));
  EXPECT_NEAR(besov_norm(f, 1.0), 10.0, 1e-12);
}

TEST(BesovNorm, HomogeneousAndSubadditive) {
  std::mt19937_64 rng(42);
  const auto g = Grid::make(2, {32, 32});
  for (int t = 0; t < 20; ++t) {
    const ScalarField a = random_trig(g, rng, 8), b = random_trig(g, rng, 8);
    for (double s : {-0.5, 0.0, 1.0}) {
      EXPECT_NEAR(besov_norm(-2.5 * a, s), 2.5 * besov_norm(a, s), 1e-12 * besov_norm(a, s));
      EXPECT_LE(besov_norm(a + b, s), besov_norm(a, s) + besov_norm(b, s) + 1e-12);
    }
  }
}

TEST(BesovNorm, VectorCombinesComponentsPerShell) {
  const auto g = Grid::make(2, {32, 32});
  const VectorField v(std::vector<ScalarField>{unit(mode(g, 1, 0)), unit(mode(g, 0, 1))});
  // both components in shell 1: block norm sqrt(2)
  EXPECT_NEAR(besov_norm(v, 1.0), 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(Bony, Examples) {
  const auto g = Grid::make(2, {64, 64});
  const ScalarField a = mode(g, 1, 0), b = mode(g, 8, 0);
  const auto sep = bony_decompose(a, b);
  const ScalarField ab = pointwise_product(a, b);
  EXPECT_LT(max_diff(sep.paraproduct_ab, ab), 1e-13);
  EXPECT_LT(max_abs(sep.paraproduct_ba), 1e-13);
  EXPECT_LT(max_abs(sep.remainder), 1e-13);

  const ScalarField c = mode(g, 4, 0);
  const auto same = bony_decompose(c, c);
  EXPECT_LT(max_diff(same.remainder, pointwise_product(c, c)), 1e-13);
  EXPECT_LT(max_abs(same.paraproduct_ab), 1e-13);
  EXPECT_LT(max_abs(same.paraproduct_ba), 1e-13);
}

TEST(Bony, SumIsDealiasedProduct) {
  std::mt19937_64 rng(43);
  for (int dim : {2, 3}) {
    const auto g = dim == 2 ? Grid::make(2, {64, 64}) : Grid::make(3, {16, 16, 16});
    for (int t = 0; t < 5; ++t) {
      const ScalarField a = random_trig(g, rng, dim == 2 ? 20 : 5) + ScalarField(g, 0.3);
      const ScalarField b = random_trig(g, rng, dim == 2 ? 20 : 5);
      const auto bd = bony_decompose(a, b);
      const ScalarField ref = dealiased_product(a, b);
      EXPECT_LT(max_diff(bd.paraproduct_ab + bd.paraproduct_ba + bd.remainder, ref), 1e-11 * max_abs(ref));
    }
  }
}

TEST(ProductEstimate, SingleModeClosedForm) {
  // cos x lives in shell 1 with L2 norm pi sqrt 2; cos^2 x = 1/2 + cos(2x)/2 has
  // its only nonzero block in shell 2. Hence |uu|_1 / |u|_1^2 = 1 / (2 pi sqrt 2).
  const auto g = Grid::make(2, {32, 32});
  const ScalarField u = mode(g, 1, 0);
  const double ratio = besov_norm(pointwise_product(u, u), 1.0) / std::pow(besov_norm(u, 1.0), 2);
  EXPECT_NEAR(ratio, 1.0 / (2.0 * pi * std::sqrt(2.0)), 1e-13);
}

TEST(ProductEstimate, UsefulPairsAreStable) {
  for (int dim : {2, 3}) {
    const auto g = dim == 2 ? Grid::make(2, {32, 32}) : Grid::make(3, {16, 16, 16});
    const double h = dim / 2.0;
    for (auto [s1, s2] : {std::pair{h, h - 1}, {h, h - 2}, {h - 1, h - 1}, {h, h}}) {
      if (s1 + s2 <= 0) continue;
      const EstimateFit fit = verify_product_estimate(g, s1, s2, 30, 7);
      EXPECT_EQ(fit.ratios.size(), 30u);
      EXPECT_TRUE(fit.stable()) << dim << " " << s1 << " " << s2 << " max " << fit.max_ratio;
    }
  }
}

TEST(Embedding, LinfBoundedByCriticalNorm) {
  const auto g = Grid::make(2, {32, 32});
  const EstimateFit fit = verify_embedding(g, 40, 3);
  EXPECT_TRUE(fit.stable());
  for (double r : fit.ratios) EXPECT_GT(r, 0.0);
}

TEST(Composition, SinAndExpm1) {
  const auto g = Grid::make(2, {32, 32});
  const auto sin_fit = verify_composition(g, [](double x) { return std::sin(x); }, 1.0, 1.0, 30, 5);
  const auto exp_fit = verify_composition(g, [](double x) { return std::expm1(x); }, 1.0, 1.0, 30, 5);
  EXPECT_TRUE(sin_fit.stable());
  EXPECT_TRUE(exp_fit.stable());
  // small data: F(f) is close to F'(0) f
  const auto lin = verify_composition(g, [](double x) { return std::sin(x); }, 1.0, 1e-4, 5, 5);
  for (double r : lin.ratios) EXPECT_NEAR(r, 1.0, 1e-6);
}

TEST(Smoothing, ZeroDataGivesZero) {
  const auto g = Grid::make(2, {16, 16});
  const SmoothingNorms n = smoothing_norms(ScalarField(g), ScalarField(g), ParabolicSymbol{}, 0.0, 1.0);
  EXPECT_EQ(n.sup_phi, 0.0);
  EXPECT_EQ(n.int_dt_phi, 0.0);
  EXPECT_EQ(n.l1_ratio(1.0), 0.0);
  EXPECT_EQ(n.l2_ratio(), 0.0);
}

TEST(Smoothing, SingleModeClosedForm) {
  // phi = exp(-t) cos x for the heat operator: every time integral is (1 - e^{-T}) |cos x|_s.
  const auto g = Grid::make(2, {16, 16});
  const double T = 1.5, s = 0.5;
  const double c = std::pow(2.0, s) * pi * std::sqrt(2.0);
  const SmoothingNorms n = smoothing_norms(mode(g, 1, 0), ScalarField(g), ParabolicSymbol{}, s, T);
  EXPECT_NEAR(n.sup_phi, c, 1e-12 * c);
  EXPECT_NEAR(n.phi0, c, 1e-12 * c);
  EXPECT_NEAR(n.int_dt_phi, (1 - std::exp(-T)) * c, 1e-10 * c);
  EXPECT_NEAR(n.int_lap_phi, (1 - std::exp(-T)) * c, 1e-10 * c);
  EXPECT_NEAR(n.l2_dt_phi, std::sqrt((1 - std::exp(-2 * T)) / 2) * c, 1e-10 * c);
  EXPECT_EQ(n.int_f, 0.0);

  // anisotropic symbol: lambda1 |xi|^2 + lambda2 (n . xi)^2 = 1.5 along n
  ParabolicSymbol op{1.0, 0.5, {1.0, 0.0, 0.0}};
  EXPECT_DOUBLE_EQ(op({1.0, 0.0, 0.0}), 1.5);
  EXPECT_DOUBLE_EQ(op({0.0, 2.0, 0.0}), 4.0);
  EXPECT_DOUBLE_EQ(op.lambda0(), 1.0);
  EXPECT_DOUBLE_EQ((ParabolicSymbol{1.0, -0.25, {}}).lambda0(), 0.75);
  const SmoothingNorms a = smoothing_norms(mode(g, 1, 0), ScalarField(g), op, s, T);
  EXPECT_NEAR(a.int_dt_phi, (1 - std::exp(-1.5 * T)) * c, 1e-10 * c);
}

TEST(Smoothing, RatiosBounded) {
  const auto g = Grid::make(2, {16, 16});
  for (double s : {0.0, 1.0}) {
    const auto fit = verify_smoothing_estimate(g, s, ParabolicSymbol{1.0, 0.5, {1.0, 0.0, 0.0}}, 1.0, 20, 11);
    EXPECT_TRUE(fit.l1.stable());
    EXPECT_TRUE(fit.l2.stable());
  }
}

TEST(XNorms, Examples) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = isotropic_coefficients(2);
  std::vector<SimState> traj(3, equilibrium_state(g, c));
  for (std::size_t k = 0; k < traj.size(); ++k) traj[k].t = 0.1 * k;
  const auto zero = x_norms(traj, c.theta_ref, c.n_ref, 1.0);
  ASSERT_EQ(zero.X1.size(), 3u);
  EXPECT_EQ(zero.X1.back(), 0.0);
  EXPECT_EQ(zero.X2.back(), 0.0);
  EXPECT_EQ(zero.X3.back(), 0.0);
  EXPECT_THROW(x_norms({traj[0]}, 1.0, c.n_ref, 1.0), Error);
  std::vector<SimState> backwards = {traj[1], traj[0]};
  EXPECT_THROW(x_norms(backwards, 1.0, c.n_ref, 1.0), Error);
}

namespace {

/// u = e^{-t} cos(y) e_x, sampled at step dt up to T.
std::vector<SimState> decaying_trajectory(const GridPtr& g, const CoefficientSet& c, double dt, double T,
                                          double amp) {
  std::vector<SimState> out;
  const int steps = static_cast<int>(std::lround(T / dt));
  for (int k = 0; k <= steps; ++k) {
    SimState s = equilibrium_state(g, c);
    s.t = k * dt;
    s.u[0] = mode(g, 0, 1, amp * std::exp(-s.t));
    s.theta += mode(g, 1, 1, 0.5 * amp * std::exp(-s.t));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST(XNorms, DecayingModeMatchesCalculus) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = isotropic_coefficients(2);
  const double T = 1.0, alpha4 = 0.7;
  // intersection norm of cos(y) e_x at indices (0, 1): |f|_0 + |grad f|_0, both in shell 1
  const double N0 = 2.0 * pi * std::sqrt(2.0);
  const double exact = N0 * (1.0 + (1.0 - std::exp(-T)) * (1.0 + alpha4));
  double prev_err = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto x = x_norms(decaying_trajectory(g, c, dt, T, 1.0), c.theta_ref, c.n_ref, alpha4);
    const double err = std::abs(x.X1.back() - exact);
    EXPECT_LT(err, 1e-3 * exact) << dt;
    if (prev_err > 0.0) EXPECT_GT(prev_err / err, 3.5);
    prev_err = err;
    EXPECT_NEAR(x.X3.back(), 0.0, 1e-14);
  }
}

TEST(XNorms, Homogeneous) {
  const auto g = Grid::make(2, {16, 16});
  const CoefficientSet c = isotropic_coefficients(2);
  const auto a = x_norms(decaying_trajectory(g, c, 0.05, 0.5, 1e-2), c.theta_ref, c.n_ref, 1.0);
  const auto b = x_norms(decaying_trajectory(g, c, 0.05, 0.5, 2e-2), c.theta_ref, c.n_ref, 1.0);
  for (std::size_t k = 0; k < a.X1.size(); ++k) {
    EXPECT_NEAR(b.X1[k], 2 * a.X1[k], 1e-12 * a.X1[k]);
    EXPECT_NEAR(b.X2[k], 2 * a.X2[k], 1e-10 * a.X2[k]);
  }
}

TEST(StateNorms, SumOfParts) {
  const auto g = Grid::make(2, {16, 16});
  VectorField u(g), m(g);
  u[0] = mode(g, 0, 1);
  const StateNorms n = state_norms(u, ScalarField(g), m);
  EXPECT_NEAR(n.u, 2.0 * pi * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(n.theta, 0.0);
  EXPECT_EQ(n.sum(), n.u);
}
