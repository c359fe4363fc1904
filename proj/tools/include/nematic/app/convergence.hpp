#pragma once

#include <string>
#include <vector>

#include "nematic/coefficients.hpp"

namespace nematic::app {

struct ConvergenceRow {
  std::string study;     // heat-temporal, stokes-temporal, manufactured-spatial
  double parameter = 0;  // dt for temporal studies, resolution for spatial ones
  double error = 0;
  double order = 0;      // observed order against the previous row; 0 for the first
};

struct ConvergenceOptions {
  int dim = 2;
  int levels = 3;
  double dt0 = 0.02;
  double horizon = 0.2;
};

/// Exact-subsystem studies under dt halving and a manufactured stationary
/// solution under grid doubling.
std::vector<ConvergenceRow> convergence_study(const CoefficientSet& c, const ConvergenceOptions& opt);

}  // namespace nematic::app
