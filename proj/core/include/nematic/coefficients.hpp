#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/keyvalue.hpp"

namespace nematic {

/// Polynomial in the temperature offset (theta - theta_ref), lowest power first.
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> c) : c_(c) {}
  explicit Polynomial(std::vector<double> c) : c_(std::move(c)) {}

  double operator()(double offset) const;
  Polynomial derivative() const;
  double constant() const { return c_.empty() ? 0.0 : c_[0]; }
  bool is_constant() const;
  const std::vector<double>& coefficients() const { return c_; }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);

private:
  std::vector<double> c_;
};

/// Material functions evaluated at one temperature.
struct MaterialValues {
  std::array<double, 9> alpha{};
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::array<double, 4> K{};    // K1..K4
  std::array<double, 4> dK{};   // first theta-derivatives
  std::array<double, 4> d2K{};  // second theta-derivatives
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

struct CoefficientSet {
  double theta_ref = 1.0;
  Point n_ref{1.0, 0.0, 0.0};
  std::array<Polynomial, 9> alpha;
  Polynomial lambda1;
  Polynomial lambda2;
  std::array<Polynomial, 4> K;  // K[0] is K1

  Polynomial gamma1() const { return alpha[3] - alpha[2]; }
  Polynomial gamma2() const { return alpha[6] - alpha[5]; }

  MaterialValues at(double theta) const;
  /// True when no Frank constant depends on temperature.
  bool frank_isothermal() const;
  /// Checks theta_ref > 0 and |n_ref| = 1 for the given dimension.
  void validate(int dim) const;
};

/// Isotropic viscous fluid with one-constant elasticity and isotropic conduction.
CoefficientSet isotropic_coefficients(int dim, double alpha4 = 1.0, double K1 = 1.0, double lambda1 = 1.0,
                                      double gamma1 = 1.0);

/// Frank constants from the classical splay/twist/saddle-splay/bend moduli.
std::array<Polynomial, 4> frank_from_classical(const Polynomial& k11, const Polynomial& k22, const Polynomial& k24,
                                               const Polynomial& k33);

/// Reads a coefficient section (`alpha0 .. alpha8`, `lambda1`, `lambda2`, `K1 .. K4`
/// or `k11, k22, k24, k33`, `theta_ref`, `n_ref`); missing polynomials are zero.
/// A polynomial is a bracketed list of coefficients or a bare constant.
CoefficientSet coefficients_from_section(const kv::Document& doc, const kv::Section& section, int dim);

/// Writes the set as a `[coefficients]` section readable by coefficients_from_section.
void write_coefficients(std::ostream& os, const CoefficientSet& set, int dim);

}  // namespace nematic
