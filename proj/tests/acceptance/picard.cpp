#include <algorithm>
#include <cmath>

#include "criteria.hpp"
#include "nematic/besov.hpp"
#include "nematic/initial_data.hpp"
#include "nematic/solver.hpp"
#include "support.hpp"

namespace acceptance {

namespace {

struct PicardStats {
  double worst_ratio = 0.0;  // max over steps of d_{j+1} / d_j
  double growth[3] = {0, 0, 0};  // max X_i(t) / X_i(0)
};

PicardStats picard_run(const nematic::GridPtr& grid, const nematic::CoefficientSet& c, double eps, double horizon) {
  const nematic::SimState s0 = nematic::random_small(grid, c, eps, 11);
  nematic::SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = horizon;
  cfg.scheme = nematic::Scheme::Picard;
  cfg.picard_tol = 1e-15;
  cfg.constraint_tol = 1e-4;
  PicardStats st;
  std::vector<nematic::SimState> trajectory;
  nematic::run(s0, c, cfg, [&](std::size_t, const nematic::SimState& s, const nematic::StepReport& r) {
    trajectory.push_back(s);
    const auto& d = r.picard_differences;
    // differences below 1e-12 eps sit at the round-off floor of the iterates
    for (std::size_t j = 1; j < d.size(); ++j)
      if (d[j - 1] > 1e-12 * eps) st.worst_ratio = std::max(st.worst_ratio, d[j] / d[j - 1]);
  });
  const auto X = nematic::x_norms(trajectory, c.theta_ref, c.n_ref, c.at(c.theta_ref).alpha[4]);
  const std::vector<double>* series[3] = {&X.X1, &X.X2, &X.X3};
  for (int i = 0; i < 3; ++i)
    for (double v : *series[i]) st.growth[i] = std::max(st.growth[i], v / series[i]->front());
  return st;
}

}  // namespace

Outcome picard_contraction() {
  Outcome out;
  for (int d : {2, 3}) {
    const auto grid = nematic::Grid::make(d, std::vector<int>(d, d == 2 ? 32 : 16));
    const nematic::CoefficientSet c = support::admissible_coefficients(d);
    const double horizon = d == 2 ? 0.5 : 0.2;
    double previous = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const PicardStats st = picard_run(grid, c, eps, horizon);
      out.check(st.worst_ratio < 1.0,
                fmt("%dD eps = %g: worst Picard difference ratio %.3e < 1", d, eps, st.worst_ratio));
      if (eps < 1e-2)
        out.check(st.worst_ratio < previous,
                  fmt("%dD eps = %g: ratio decreases with eps (%.3e < %.3e)", d, eps, st.worst_ratio, previous));
      previous = st.worst_ratio;
      out.check(std::max({st.growth[0], st.growth[1], st.growth[2]}) <= 10.0,
                fmt("%dD eps = %g: X1, X2, X3 grow by %.2f, %.2f, %.2f <= 10 over t in [0, %g]", d, eps,
                    st.growth[0], st.growth[1], st.growth[2], horizon));
    }
  }
  return out;
}

}  // namespace acceptance
