#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "nematic/coefficients.hpp"
#include "nematic/grid.hpp"

namespace support {

/// Temperature-dependent K1 and lambda1, anisotropic conduction and a viscosity
/// set that passes the admissibility checks in two and three dimensions.
inline nematic::CoefficientSet admissible_coefficients(int dim) {
  nematic::CoefficientSet c = nematic::isotropic_coefficients(dim, 1.0, 1.0, 1.0, 1.0);
  c.K[0] = nematic::Polynomial{1.0, 0.3};
  c.lambda1 = nematic::Polynomial{1.0, 0.2};
  c.lambda2 = nematic::Polynomial{0.3};
  c.alpha[1] = nematic::Polynomial{0.2};
  c.alpha[5] = nematic::Polynomial{0.3};
  c.alpha[6] = nematic::Polynomial{0.1};
  return c;
}

/// Smooth unit director normalize(e + sum_j cos(k_j . x + phi_j) v_j),
/// available at arbitrary points so it can be composed with deformations.
/// |e| >= 2 exceeds the largest possible perturbation, keeping the
/// normalization far from its singularity.
class RandomDirector {
public:
  RandomDirector(int dim, std::mt19937_64& rng, double amplitude = 0.25) : dim_(dim) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> K(-2, 2);
    for (int a = 0; a < dim; ++a) base_[a] = U(rng);
    base_[0] += 3.0;
    terms_.resize(4);
    for (auto& t : terms_) {
      for (int a = 0; a < dim; ++a) {
        t.k[a] = K(rng);
        t.v[a] = amplitude * U(rng);
      }
      t.phase = 3.0 * U(rng);
    }
  }

  nematic::Point operator()(const nematic::Point& x) const {
    nematic::Point v = base_;
    for (const auto& t : terms_) {
      double arg = t.phase;
      for (int a = 0; a < dim_; ++a) arg += t.k[a] * x[a];
      const double c = std::cos(arg);
      for (int a = 0; a < dim_; ++a) v[a] += c * t.v[a];
    }
    double r = 0.0;
    for (double e : v) r += e * e;
    r = std::sqrt(r);
    for (double& e : v) e /= r;
    return v;
  }

private:
  struct Term {
    std::array<int, 3> k{0, 0, 0};
    nematic::Point v{0.0, 0.0, 0.0};
    double phase = 0.0;
  };
  int dim_;
  nematic::Point base_{0.0, 0.0, 0.0};
  std::vector<Term> terms_;
};

}  // namespace support
