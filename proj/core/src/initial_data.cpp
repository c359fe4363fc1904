#include "nematic/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "nematic/besov.hpp"
#include "nematic/error.hpp"

namespace nematic {

namespace {

double phase_of(const GridPtr& g, const std::array<int, 3>& k, const Point& x) {
  double s = 0.0;
  for (int a = 0; a < g->dim(); ++a) s += 2.0 * std::numbers::pi * k[a] * x[a] / g->period(a);
  return s;
}

VectorField constant_vector(const GridPtr& g, const Point& v) {
  VectorField out(g);
  for (int i = 0; i < g->dim(); ++i) out[i] = ScalarField(g, v[i]);
  return out;
}

VectorField normalized(const VectorField& n) {
  VectorField out = n;
  for (std::size_t p = 0; p < n.grid()->size(); ++p) {
    Point v = n.at(p);
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(r > 1e-12)) throw Error(ErrorCode::SingularDirector, "initial director vanishes at a grid point");
    for (double& x : v) x /= r;
    out.set(p, v);
  }
  return out;
}

double max_norm(const VectorField& v) {
  double m = 0.0;
  for (std::size_t p = 0; p < v.grid()->size(); ++p) {
    const Point x = v.at(p);
    m = std::max(m, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  }
  return m;
}

}  // namespace

Point normal_to(const Point& n, int dim) {
  int best = 0;
  for (int a = 1; a < dim; ++a)
    if (std::abs(n[a]) < std::abs(n[best])) best = a;
  Point t{0.0, 0.0, 0.0};
  t[best] = 1.0;
  const double dot = n[0] * t[0] + n[1] * t[1] + n[2] * t[2];
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    t[i] -= dot * n[i];
    r += t[i] * t[i];
  }
  for (double& x : t) x /= std::sqrt(r);
  return t;
}

SimState equilibrium_state(const GridPtr& grid, const CoefficientSet& c) {
  SimState s;
  s.u = VectorField(grid);
  s.n = constant_vector(grid, c.n_ref);
  s.theta = ScalarField(grid, c.theta_ref);
  s.p = ScalarField(grid);
  return s;
}

SimState state_from_modes(const GridPtr& grid, const CoefficientSet& c, const ModeList& modes) {
  SimState s = equilibrium_state(grid, c);
  const int d = grid->dim();
  auto check = [&](const FourierMode& m, bool vector) {
    if (vector && (m.component < 0 || m.component >= d))
      throw Error(ErrorCode::Config, "mode component " + std::to_string(m.component) + " out of range");
    for (int a = 0; a < d; ++a)
      if (3 * std::abs(m.k[a]) >= grid->resolution(a))
        throw Error(ErrorCode::Config, "mode wavenumber outside the dealiased band");
  };
  for (const auto& m : modes.u) {
    check(m, true);
    for (std::size_t p = 0; p < grid->size(); ++p)
      s.u[m.component][p] += m.amplitude * std::cos(phase_of(grid, m.k, grid->position(p)) + m.phase);
  }
  s.u = leray_project(s.u);
  for (const auto& m : modes.n) {
    check(m, true);
    for (std::size_t p = 0; p < grid->size(); ++p)
      s.n[m.component][p] += m.amplitude * std::cos(phase_of(grid, m.k, grid->position(p)) + m.phase);
  }
  s.n = normalized(s.n);
  for (const auto& m : modes.theta) {
    check(m, false);
    for (std::size_t p = 0; p < grid->size(); ++p)
      s.theta[p] += m.amplitude * std::cos(phase_of(grid, m.k, grid->position(p)) + m.phase);
  }
  return s;
}

SimState shear_twist(const GridPtr& grid, const CoefficientSet& c, double epsilon) {
  SimState s = equilibrium_state(grid, c);
  const int d = grid->dim();
  const Point t = normal_to(c.n_ref, d);
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const Point x = grid->position(p);
    s.u[0][p] = epsilon * std::sin(2.0 * std::numbers::pi * x[1] / grid->period(1));
    const double w = epsilon * std::sin(2.0 * std::numbers::pi * x[d - 1] / grid->period(d - 1));
    for (int i = 0; i < d; ++i) s.n[i][p] += w * t[i];
  }
  s.n = normalized(s.n);
  return s;
}

SimState hot_spot(const GridPtr& grid, const CoefficientSet& c, double epsilon) {
  SimState s = equilibrium_state(grid, c);
  const int d = grid->dim();
  constexpr double kappa = 2.0;
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const Point x = grid->position(p);
    double e = 0.0;
    for (int a = 0; a < d; ++a) e += std::cos(2.0 * std::numbers::pi * x[a] / grid->period(a) - std::numbers::pi) - 1.0;
    s.theta[p] = c.theta_ref * (1.0 + epsilon * std::exp(kappa * e));
  }
  return s;
}

SimState random_small(const GridPtr& grid, const CoefficientSet& c, double epsilon, std::uint64_t seed, int kmax) {
  if (kmax < 1) throw Error(ErrorCode::Config, "kmax must be at least 1");
  const int d = grid->dim();
  std::vector<int> band(d);
  for (int a = 0; a < d; ++a) {
    band[a] = kmax;
    if (3 * kmax >= grid->resolution(a)) throw Error(ErrorCode::Config, "kmax outside the dealiased band");
  }
  std::mt19937_64 rng(seed);
  SimState s = equilibrium_state(grid, c);
  VectorField u(grid), w(grid);
  for (int i = 0; i < d; ++i) u[i] = random_band_limited(grid, rng(), 1.0, band);
  for (int i = 0; i < d; ++i) w[i] = random_band_limited(grid, rng(), 1.0, band);
  ScalarField r = random_band_limited(grid, rng(), 1.0, band);

  u = leray_project(u);
  const double um = max_norm(u);
  if (um > 0.0) u *= epsilon / um;
  s.u = u;

  for (std::size_t p = 0; p < grid->size(); ++p) {
    Point v = w.at(p);
    const double dot = v[0] * c.n_ref[0] + v[1] * c.n_ref[1] + v[2] * c.n_ref[2];
    for (int i = 0; i < 3; ++i) v[i] -= dot * c.n_ref[i];
    w.set(p, v);
  }
  const double wm = max_norm(w);
  if (wm > 0.0) w *= epsilon / wm;
  s.n += w;
  s.n = normalized(s.n);

  const double rm = max_abs(r);
  for (std::size_t p = 0; p < grid->size(); ++p) s.theta[p] = c.theta_ref * (1.0 + (rm > 0.0 ? epsilon * r[p] / rm : 0.0));
  return s;
}

}  // namespace nematic
