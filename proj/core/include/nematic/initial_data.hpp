#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nematic/coefficients.hpp"
#include "nematic/grid.hpp"
#include "nematic/state.hpp"

namespace nematic {

/// One real Fourier mode a cos(k . x + phase); k in integer wavenumbers.
struct FourierMode {
  int component = 0;  // ignored for temperature modes
  std::array<int, 3> k{0, 0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
};

struct ModeList {
  std::vector<FourierMode> u;      // summed, then Leray-projected
  std::vector<FourierMode> n;      // added to n_ref, then normalized
  std::vector<FourierMode> theta;  // added to theta_ref
};

/// Equilibrium (0, n_ref, theta_ref).
SimState equilibrium_state(const GridPtr& grid, const CoefficientSet& c);
SimState state_from_modes(const GridPtr& grid, const CoefficientSet& c, const ModeList& modes);

/// Shear flow u = eps sin(x_1) e_0 with a director tilt eps sin(x_{d-1}) normal to n_ref.
SimState shear_twist(const GridPtr& grid, const CoefficientSet& c, double epsilon);
/// Smooth periodic temperature bump of relative height eps at the box centre.
SimState hot_spot(const GridPtr& grid, const CoefficientSet& c, double epsilon);
/// Random band-limited perturbations (|k_a| <= kmax) with max |u| = eps,
/// max |n - n_ref| about eps, and max |theta - theta_ref| = eps theta_ref.
SimState random_small(const GridPtr& grid, const CoefficientSet& c, double epsilon, std::uint64_t seed,
                      int kmax = 4);

/// Unit vector normal to n, built from the first coordinate axis least aligned with it.
Point normal_to(const Point& n, int dim);

}  // namespace nematic
