#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nematic/coefficients.hpp"

namespace nematic {

/// Viscosities and conductivities frozen at one temperature.
struct ViscositySample {
  std::array<double, 9> alpha{};
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int dim = 3;

  double gamma1() const { return alpha[3] - alpha[2]; }
  double gamma2() const { return alpha[6] - alpha[5]; }
};

ViscositySample viscosity_sample(const CoefficientSet& c, double theta, int dim);

struct Margin {
  std::string name;  // the inequality, written as "lhs >= 0"
  double value = 0.0;
};

/// A named family of inequalities; it holds when every margin is >= 0.
struct InequalityList {
  std::string name;
  std::vector<Margin> margins;
  bool holds() const;
};

struct SemidefiniteResult {
  bool ok = false;
  double lambda_min = 0.0;
  double norm = 0.0;  // largest eigenvalue magnitude
};

/// Symmetric eigen-decomposition; ok iff lambda_min >= -1e-10 * norm.
SemidefiniteResult semidefinite_check(const Eigen::MatrixXd& m);
/// Determinants of the leading principal k x k blocks, k = 1..n.
std::vector<double> leading_minors(const Eigen::MatrixXd& m);

/// det of the N x N matrix with x in the corner, z on the rest of the diagonal and y elsewhere.
double structured_det(double x, double y, double z, int N);

/// The d x d matrix governing the trace-coupled diagonal sector of the dissipation.
Eigen::MatrixXd build_matrix_M(const ViscositySample& s, int d);
/// det M in closed form, alpha4^(d-2) [c {(d-1)(a1+a5+a6) + d a4} - (d-1) b^2].
double det_M_closed_form(const ViscositySample& s, int d);
/// The same determinant with the extra alpha4 factor of the printed identity.
double det_M_printed(const ViscositySample& s, int d);

/// Mechanical dissipation sigma^L : D + g . N written out term by term.
double dissipation_form(const ViscositySample& s, const Eigen::VectorXd& n, const Eigen::VectorXd& N,
                        const Eigen::MatrixXd& D, bool compressible);
/// Matrix of the dissipation form for n = e1 in orthonormal coordinates:
/// N over e2..ed, then D over an orthonormal basis of (traceless) symmetric matrices.
Eigen::MatrixXd dissipation_matrix(const ViscositySample& s, int d, bool compressible);

struct HeatCheck {
  bool ok = false;
  Margin lambda1;
  Margin lambda_sum;
};
HeatCheck check_heat(const ViscositySample& s);

struct FormCheck {
  bool ok = false;          // eigenvalue verdict on the dissipation form
  double lambda_min = 0.0;
  std::vector<InequalityList> variants;  // closed-form inequality lists, reported
  std::vector<std::string> disagreements;
};
FormCheck check_incompressible(const ViscositySample& s);
FormCheck check_compressible(const ViscositySample& s, int d);

inline constexpr std::uint64_t kOracleSeed = 0x5eed2024ULL;

struct OracleResult {
  double min_value = 0.0;     // best value after local refinement of the best sample
  double sampled_min = 0.0;   // best raw sample
  double strain_sector_min = 0.0;     // samples with N = 0
  double transport_sector_min = 0.0;  // samples with D = 0
  Eigen::VectorXd n, N;
  Eigen::MatrixXd D;
  std::string argmin;
};

/// Minimum of (sigma^L : D + g . N) / (|N|^2 + |D|^2) over random unit n, N
/// orthogonal to n and symmetric D (traceless unless compressible), evaluated
/// through the constitutive stress and transport laws. The best sample is then
/// polished by Rayleigh-Ritz descent on the same black-box form.
OracleResult dissipation_quadratic_min(const ViscositySample& s, int d, bool compressible, int trials,
                                       std::uint64_t seed = kOracleSeed);

struct AdmissibilityReport {
  double theta = 0.0;
  int dim = 3;
  bool heat_ok = false;
  bool incompressible_ok = false;
  bool compressible_ok = false;
  HeatCheck heat;
  FormCheck incompressible;
  FormCheck compressible;
  double oracle_min_incompressible = 0.0;
  double oracle_min_compressible = 0.0;
  std::vector<std::string> variant_disagreements;
};

AdmissibilityReport check_admissibility(const ViscositySample& s, int d, int oracle_trials,
                                        std::uint64_t seed = kOracleSeed);

}  // namespace nematic
