#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "nematic/grid.hpp"

namespace testing_support {

using nematic::GridPtr;
using nematic::Point;
using nematic::ScalarField;
using nematic::VectorField;

inline double max_diff(const ScalarField& a, const ScalarField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
  double e = 0.0;
  for (int c = 0; c < a.dim(); ++c) e = std::max(e, max_diff(a[c], b[c]));
  return e;
}

/// Sum of a few random low modes, band-limited to |k_a| <= kmax.
inline ScalarField random_trig(const GridPtr& g, std::mt19937_64& rng, int kmax = 3) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> K(-kmax, kmax);
  struct Term {
    int k[3];
    double a, ph;
  };
  std::vector<Term> terms(6);
  for (auto& t : terms) {
    for (int a = 0; a < 3; ++a) t.k[a] = a < g->dim() ? K(rng) : 0;
    t.a = U(rng);
    t.ph = 3.0 * U(rng);
  }
  return ScalarField::from_function(g, [&](const Point& x) {
    double s = 0.0;
    for (const auto& t : terms) {
      double arg = t.ph;
      for (int a = 0; a < g->dim(); ++a) arg += t.k[a] * x[a] * 2.0 * M_PI / g->period(a);
      s += t.a * std::cos(arg);
    }
    return s;
  });
}

inline VectorField random_trig_vector(const GridPtr& g, std::mt19937_64& rng, int kmax = 3) {
  std::vector<ScalarField> c;
  for (int i = 0; i < g->dim(); ++i) c.push_back(random_trig(g, rng, kmax));
  return VectorField(std::move(c));
}

}  // namespace testing_support
