#pragma once

#include <Eigen/Dense>
#include <array>

#include "nematic/coefficients.hpp"
#include "nematic/grid.hpp"

namespace nematic {

/// Pointwise material laws. Vectors and matrices may be fixed or dynamic size;
/// field-level wrappers use 3-vectors padded with zeros in two dimensions.
/// Gradient convention: G(k, j) = d_j n_k.
namespace pointwise {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Frank constants and their temperature derivatives are passed as K[0..3] = K1..K4.
inline double oseen_frank(const std::array<double, 4>& K, const Vec3& n, const Mat3& G) {
  const double tr = G.trace();
  return 0.5 * (K[0] * G.squaredNorm() + K[1] * tr * tr + K[2] * (G * n).squaredNorm() + K[3] * (G * G).trace());
}

/// dW/dG.
inline Mat3 frank_stress(const std::array<double, 4>& K, const Vec3& n, const Mat3& G) {
  return K[0] * G + K[1] * G.trace() * Mat3::Identity() + K[2] * (G * n) * n.transpose() + K[3] * G.transpose();
}

/// Explicit dW/dn (only the bend term depends on n itself).
inline Vec3 frank_director_derivative(const std::array<double, 4>& K, const Vec3& n, const Mat3& G) {
  return K[2] * G.transpose() * (G * n);
}

template <class Vec, class Mat>
Mat leslie_stress(const std::array<double, 9>& a, const Vec& n, const Vec& N, const Mat& D, bool compressible) {
  const Vec Dn = D * n;
  const double nDn = n.dot(Dn);
  Mat s = a[1] * nDn * (n * n.transpose()) + a[2] * (N * n.transpose()) + a[3] * (n * N.transpose()) + a[4] * D +
          a[5] * (Dn * n.transpose()) + a[6] * (n * Dn.transpose());
  if (compressible) {
    const double tr = D.trace();
    s += (a[0] * nDn + a[7] * tr) * Mat::Identity(D.rows(), D.cols()) + a[8] * tr * (n * n.transpose());
  }
  return s;
}

/// g = gamma1 N + gamma2 (Dn - (n.Dn) n).
template <class Vec, class Mat>
Vec kinematic_transport(double gamma1, double gamma2, const Vec& n, const Vec& N, const Mat& D) {
  const Vec Dn = D * n;
  return gamma1 * N + gamma2 * (Dn - n.dot(Dn) * n);
}

/// g = -(sigma - sigma^T) n.
template <class Vec, class Mat>
Vec kinematic_transport_from_stress(const Mat& sigma, const Vec& n) {
  return -(sigma - sigma.transpose()) * n;
}

/// sigma^L : D + g . N, the mechanical part of the entropy production.
template <class Vec, class Mat>
double mechanical_dissipation(const std::array<double, 9>& a, const Vec& n, const Vec& N, const Mat& D,
                              bool compressible) {
  const Mat s = leslie_stress(a, n, N, D, compressible);
  const Vec g = kinematic_transport(a[3] - a[2], a[6] - a[5], n, N, D);
  return (s.array() * D.array()).sum() + g.dot(N);
}

inline Vec3 heat_flux(double lambda1, double lambda2, const Vec3& n, const Vec3& grad_theta) {
  return lambda1 * grad_theta + lambda2 * n.dot(grad_theta) * n;
}

}  // namespace pointwise

struct StrainVorticity {
  TensorField D;
  TensorField Omega;
};

StrainVorticity strain_and_vorticity(const TensorField& grad_u);

/// N = dn_dt + (u . grad) n - Omega n.
VectorField corotational_flux(const VectorField& dn_dt, const VectorField& u, const TensorField& grad_n,
                              const TensorField& Omega, const VectorField& n);

ScalarField oseen_frank_energy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                               const CoefficientSet& c);
/// F = -theta ln(theta) + W_F.
ScalarField free_energy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                        const CoefficientSet& c);
/// h = dW/dn - div dW/d(grad n) with coefficients taken at the local temperature.
VectorField molecular_field(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                            const CoefficientSet& c);
ScalarField lagrange_multiplier(const VectorField& h, const VectorField& n);
/// sigma^E_ij = -d_i n_k dW/d(d_j n_k).
TensorField ericksen_stress(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                            const CoefficientSet& c);
TensorField leslie_stress(const ScalarField& theta, const VectorField& n, const VectorField& N, const TensorField& D,
                          const CoefficientSet& c, bool compressible);
/// Projected form of g. With verify set, the form -(sigma^L - sigma^L^T) n is
/// also assembled and a relative mismatch above 1e-10 raises an error.
VectorField kinematic_transport(const ScalarField& theta, const VectorField& n, const VectorField& N,
                                const TensorField& D, const CoefficientSet& c, bool verify = false);
VectorField heat_flux(const ScalarField& theta, const VectorField& grad_theta, const VectorField& n,
                      const CoefficientSet& c);
/// eta = 1 + ln(theta) - dW_F/dtheta.
ScalarField entropy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                    const CoefficientSet& c);
/// e_int = theta + W_F - theta dW_F/dtheta.
ScalarField internal_energy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                            const CoefficientSet& c);
/// e_tot = e_int + rho |u|^2 / 2.
ScalarField total_energy(const VectorField& u, const ScalarField& theta, const VectorField& n,
                         const TensorField& grad_n, const CoefficientSet& c, double rho = 1.0);
/// theta Delta* = sigma^L : D + g . N + q . grad(theta) / theta (incompressible stress).
ScalarField entropy_production(const ScalarField& theta, const VectorField& grad_theta, const VectorField& n,
                               const VectorField& N, const TensorField& D, const CoefficientSet& c);
/// Sigma = T^T u + (dW/d grad n)^T n_dot - u e_tot with T = -p Id + sigma^E + sigma^L.
VectorField work_flux(const VectorField& u, const ScalarField& theta, const VectorField& n,
                      const VectorField& dn_dt, const TensorField& grad_n, const ScalarField& pressure,
                      const CoefficientSet& c);

/// Throws a temperature-positivity error if any sample is not strictly positive.
void require_positive_temperature(const ScalarField& theta);

}  // namespace nematic
