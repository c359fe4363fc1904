#include <algorithm>
#include <cmath>

#include "criteria.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/solver.hpp"
#include "support.hpp"

namespace acceptance {

namespace {

double unit_defect(const nematic::VectorField& n) {
  double worst = 0.0;
  for (std::size_t p = 0; p < n.grid()->size(); ++p) {
    double r = 0.0;
    for (int i = 0; i < n.dim(); ++i) r += n[i][p] * n[i][p];
    worst = std::max(worst, std::abs(r - 1.0));
  }
  return worst;
}

}  // namespace

Outcome unit_constraint() {
  Outcome out;
  for (int d : {2, 3}) {
    const auto grid = nematic::Grid::make(d, std::vector<int>(d, d == 2 ? 32 : 16));
    const nematic::CoefficientSet c = support::admissible_coefficients(d);
    const nematic::SimState s0 = nematic::random_small(grid, c, 0.05, 55);
    std::vector<double> dts, drifts;
    double post = 0.0;
    for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
      nematic::SolverConfig cfg;
      cfg.dt = dt;
      cfg.t_end = 0.04;
      cfg.constraint_tol = 1e-3;
      double drift = 0.0;
      nematic::run(s0, c, cfg, [&](std::size_t k, const nematic::SimState& s, const nematic::StepReport& r) {
        if (k == 0) return;
        drift = std::max(drift, r.constraint_drift);
        post = std::max(post, unit_defect(s.n));
      });
      dts.push_back(dt);
      drifts.push_back(drift);
      out.note(fmt("%dD: dt = %g, max pre-renormalization drift per step %.3e", d, dt, drift));
    }
    out.check(post <= 1e-14, fmt("%dD: max | |n|^2 - 1 | after renormalization %.2e <= 1e-14", d, post));
    const double order = observed_order(dts, drifts);
    out.check(order >= 1.8, fmt("%dD: observed drift order %.3f >= 1.8 over three dt halvings", d, order));
  }
  return out;
}

}  // namespace acceptance
