#include "nematic/app/convergence.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numbers>

#include "nematic/error.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/solver.hpp"

namespace nematic::app {

namespace {

/// Temperature-independent copy of c with every function frozen at theta_ref,
/// so the subsystems become linear.
CoefficientSet frozen(const CoefficientSet& c) {
  CoefficientSet f = c;
  const MaterialValues m = c.at(c.theta_ref);
  for (int i = 0; i < 9; ++i) f.alpha[i] = Polynomial{m.alpha[i]};
  f.lambda1 = Polynomial{m.lambda1};
  f.lambda2 = Polynomial{m.lambda2};
  for (int i = 0; i < 4; ++i) f.K[i] = Polynomial{m.K[i]};
  return f;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double e = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) e = std::max(e, std::abs(a[p] - b[p]));
  return e;
}

SimState advance(const SimState& s0, const CoefficientSet& c, Subsystem sub, double dt, double horizon) {
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = horizon;
  cfg.subsystem = sub;
  return run(s0, c, cfg).final_state;
}

std::array<int, 3> unit_mode(int a) {
  std::array<int, 3> k{0, 0, 0};
  k[a] = 1;
  return k;
}

double heat_error(const GridPtr& g, const CoefficientSet& c, double dt, double horizon) {
  const int d = g->dim();
  ModeList ml;
  std::array<int, 3> k{1, 1, 1};
  if (d == 2) k[2] = 0;
  ml.theta.push_back({0, k, 0.1 * c.theta_ref, 0.0});
  const SimState s0 = state_from_modes(g, c, ml);
  const SimState s = advance(s0, c, Subsystem::Heat, dt, horizon);
  const LinearOperators ops(g, c, Subsystem::Heat);
  Spectrum th = forward(s0.theta);
  for (std::size_t q = 1; q < th.coeffs.size(); ++q) th.coeffs[q] *= std::exp(ops.heat_symbol(q) * s.t);
  return max_diff(s.theta, inverse(th));
}

double stokes_error(const GridPtr& g, const CoefficientSet& c, double dt, double horizon) {
  const int d = g->dim();
  ModeList ml;
  ml.u.push_back({0, unit_mode(1), 0.1, 0.0});
  ml.u.push_back({1, unit_mode(0), 0.05, 0.4});
  const SimState s0 = state_from_modes(g, c, ml);
  const SimState s = advance(s0, c, Subsystem::Stokes, dt, horizon);
  const LinearOperators ops(g, c, Subsystem::Stokes);
  const int B = ops.block();
  std::vector<Spectrum> u;
  for (int i = 0; i < d; ++i) u.push_back(forward(s0.u[i]));
  for (std::size_t q = 1; q < g->spectral_size(); ++q) {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> L(
        ops.flow_block(q), B, B);
    const Eigen::MatrixXd E = (L.topLeftCorner(d, d) * s.t).exp();
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v[i] = u[i].coeffs[q];
    const Eigen::VectorXcd w = E * v;
    for (int i = 0; i < d; ++i) u[i].coeffs[q] = w[i];
  }
  double e = 0.0;
  for (int i = 0; i < d; ++i) e = std::max(e, max_diff(s.u[i], inverse(u[i])));
  return e;
}

double manufactured_error(int dim, int n, const CoefficientSet& c) {
  const GridPtr g = Grid::make(dim, std::vector<int>(dim, n));
  ModeList ml;
  ml.u.push_back({0, unit_mode(1), 0.1, 0.3});
  ml.u.push_back({1, {2, 0, 0}, 0.05, 0.0});
  ml.n.push_back({1, {1, 1, 0}, 0.1, 0.0});
  ml.theta.push_back({0, {1, 2, 0}, 0.05 * c.theta_ref, 0.0});
  if (dim == 3) ml.u.push_back({2, {1, 0, 0}, 0.05, 0.2});
  const SimState ex = state_from_modes(g, c, ml);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-2;
  cfg.constraint_tol = 1e-6;
  cfg.forcing = stationary_forcing(ex, c);
  const SimState s = run(ex, c, cfg).final_state;
  double e = max_diff(s.theta, ex.theta);
  for (int i = 0; i < dim; ++i) e = std::max({e, max_diff(s.u[i], ex.u[i]), max_diff(s.n[i], ex.n[i])});
  return e;
}

void add_orders(std::vector<ConvergenceRow>& rows, std::size_t first) {
  for (std::size_t i = first + 1; i < rows.size(); ++i) {
    const double ratio = rows[i - 1].parameter / rows[i].parameter;
    const double r = std::max(ratio, 1.0 / ratio);
    rows[i].order = (rows[i].error > 0.0 && rows[i - 1].error > 0.0)
                        ? std::log(rows[i - 1].error / rows[i].error) / std::log(r)
                        : 0.0;
  }
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const CoefficientSet& c, const ConvergenceOptions& opt) {
  if (opt.levels < 1) throw Error(ErrorCode::Config, "convergence study needs at least one refinement level");
  if (opt.dim != 2 && opt.dim != 3) throw Error(ErrorCode::Config, "convergence study dim must be 2 or 3");
  if (!(opt.dt0 > 0.0) || !(opt.horizon >= opt.dt0))
    throw Error(ErrorCode::Config, "convergence study needs 0 < dt0 <= horizon");
  const CoefficientSet lin = frozen(c);
  const GridPtr g = Grid::make(opt.dim, std::vector<int>(opt.dim, opt.dim == 2 ? 32 : 16));
  std::vector<ConvergenceRow> rows;

  std::size_t first = rows.size();
  for (int l = 0; l < opt.levels; ++l) {
    const double dt = opt.dt0 / std::pow(2.0, l);
    rows.push_back({"heat-temporal", dt, heat_error(g, lin, dt, opt.horizon), 0.0});
  }
  add_orders(rows, first);

  first = rows.size();
  for (int l = 0; l < opt.levels; ++l) {
    const double dt = opt.dt0 / std::pow(2.0, l);
    rows.push_back({"stokes-temporal", dt, stokes_error(g, lin, dt, opt.horizon), 0.0});
  }
  add_orders(rows, first);

  first = rows.size();
  const int n0 = opt.dim == 2 ? 16 : 8;
  for (int l = 0; l < opt.levels; ++l) {
    const int n = n0 << l;
    rows.push_back({"manufactured-spatial", static_cast<double>(n), manufactured_error(opt.dim, n, c), 0.0});
  }
  add_orders(rows, first);
  return rows;
}

}  // namespace nematic::app
