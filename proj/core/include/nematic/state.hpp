#pragma once

#include "nematic/grid.hpp"

namespace nematic {

/// Unknowns of the simulation at one instant.
struct SimState {
  double t = 0.0;
  VectorField u;      // divergence-free velocity
  VectorField n;      // unit director
  ScalarField theta;  // temperature, strictly positive
  ScalarField p;      // diagnostic pressure, zero mean

  const GridPtr& grid() const { return theta.grid(); }
};

}  // namespace nematic
