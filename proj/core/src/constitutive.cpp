#include "nematic/constitutive.hpp"

#include <cmath>

#include "nematic/error.hpp"

namespace nematic {

using pointwise::Mat3;
using pointwise::Vec3;

namespace {

Vec3 vec_at(const VectorField& v, std::size_t i) {
  const Point p = v.at(i);
  return Vec3(p[0], p[1], p[2]);
}

Mat3 mat_at(const TensorField& t, std::size_t i) {
  const auto m = t.at(i);
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out(r, c) = m[r][c];
  return out;
}

void put(VectorField& v, std::size_t i, const Vec3& x) { v.set(i, {x[0], x[1], x[2]}); }

void put(TensorField& t, std::size_t i, const Mat3& m) {
  std::array<Point, 3> a{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a[r][c] = m(r, c);
  t.set(i, a);
}

double dW_dtheta(const MaterialValues& m, const Vec3& n, const Mat3& G) { return pointwise::oseen_frank(m.dK, n, G); }

}  // namespace

void require_positive_temperature(const ScalarField& theta) {
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (!(theta[i] > 0.0))
      throw Error(ErrorCode::TemperaturePositivity, "temperature is not positive at sample " + std::to_string(i));
}

StrainVorticity strain_and_vorticity(const TensorField& grad_u) {
  StrainVorticity out{TensorField(grad_u.grid()), TensorField(grad_u.grid())};
  const int d = grad_u.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < grad_u.grid()->size(); ++p) {
        const double a = grad_u(i, j)[p];
        const double b = grad_u(j, i)[p];
        out.D(i, j)[p] = 0.5 * (a + b);
        out.Omega(i, j)[p] = 0.5 * (a - b);
      }
  return out;
}

VectorField corotational_flux(const VectorField& dn_dt, const VectorField& u, const TensorField& grad_n,
                              const TensorField& Omega, const VectorField& n) {
  require_same_grid(dn_dt.grid(), u.grid());
  require_same_grid(u.grid(), n.grid());
  VectorField out(n.grid());
  for (std::size_t p = 0; p < n.grid()->size(); ++p) {
    const Vec3 N = vec_at(dn_dt, p) + mat_at(grad_n, p) * vec_at(u, p) - mat_at(Omega, p) * vec_at(n, p);
    put(out, p, N);
  }
  return out;
}

ScalarField oseen_frank_energy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                               const CoefficientSet& c) {
  require_positive_temperature(theta);
  ScalarField out(theta.grid());
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = pointwise::oseen_frank(c.at(theta[p]).K, vec_at(n, p), mat_at(grad_n, p));
  return out;
}

ScalarField free_energy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                        const CoefficientSet& c) {
  ScalarField w = oseen_frank_energy(theta, n, grad_n, c);
  for (std::size_t p = 0; p < w.size(); ++p) w[p] -= theta[p] * std::log(theta[p]);
  return w;
}

VectorField molecular_field(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                            const CoefficientSet& c) {
  require_positive_temperature(theta);
  TensorField P(theta.grid());
  VectorField h(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    const Vec3 nv = vec_at(n, p);
    const Mat3 G = mat_at(grad_n, p);
    put(P, p, pointwise::frank_stress(m.K, nv, G));
    put(h, p, pointwise::frank_director_derivative(m.K, nv, G));
  }
  h -= divergence(P);
  return h;
}

ScalarField lagrange_multiplier(const VectorField& h, const VectorField& n) {
  require_same_grid(h.grid(), n.grid());
  ScalarField beta(h.grid());
  for (std::size_t p = 0; p < beta.size(); ++p) beta[p] = vec_at(h, p).dot(vec_at(n, p));
  return beta;
}

TensorField ericksen_stress(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                            const CoefficientSet& c) {
  require_positive_temperature(theta);
  TensorField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const Mat3 G = mat_at(grad_n, p);
    put(out, p, -G.transpose() * pointwise::frank_stress(c.at(theta[p]).K, vec_at(n, p), G));
  }
  return out;
}

TensorField leslie_stress(const ScalarField& theta, const VectorField& n, const VectorField& N, const TensorField& D,
                          const CoefficientSet& c, bool compressible) {
  TensorField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    put(out, p, pointwise::leslie_stress(m.alpha, vec_at(n, p), vec_at(N, p), mat_at(D, p), compressible));
  }
  return out;
}

VectorField kinematic_transport(const ScalarField& theta, const VectorField& n, const VectorField& N,
                                const TensorField& D, const CoefficientSet& c, bool verify) {
  VectorField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    const Vec3 nv = vec_at(n, p);
    const Vec3 Nv = vec_at(N, p);
    const Mat3 Dv = mat_at(D, p);
    const Vec3 g = pointwise::kinematic_transport(m.gamma1, m.gamma2, nv, Nv, Dv);
    if (verify) {
      const Mat3 s = pointwise::leslie_stress(m.alpha, nv, Nv, Dv, false);
      const Vec3 g2 = pointwise::kinematic_transport_from_stress<Vec3, Mat3>(s, nv);
      const double scale = std::abs(m.gamma1) * Nv.norm() + std::abs(m.gamma2) * Dv.norm();
      if ((g - g2).norm() > 1e-10 * scale + 1e-300)
        throw Error(ErrorCode::ConstitutiveInconsistency,
                    "projected and stress forms of g disagree at sample " + std::to_string(p));
    }
    put(out, p, g);
  }
  return out;
}

VectorField heat_flux(const ScalarField& theta, const VectorField& grad_theta, const VectorField& n,
                      const CoefficientSet& c) {
  VectorField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    put(out, p, pointwise::heat_flux(m.lambda1, m.lambda2, vec_at(n, p), vec_at(grad_theta, p)));
  }
  return out;
}

ScalarField entropy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                    const CoefficientSet& c) {
  require_positive_temperature(theta);
  ScalarField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    out[p] = 1.0 + std::log(theta[p]) - dW_dtheta(m, vec_at(n, p), mat_at(grad_n, p));
  }
  return out;
}

ScalarField internal_energy(const ScalarField& theta, const VectorField& n, const TensorField& grad_n,
                            const CoefficientSet& c) {
  require_positive_temperature(theta);
  ScalarField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    const Vec3 nv = vec_at(n, p);
    const Mat3 G = mat_at(grad_n, p);
    out[p] = theta[p] + pointwise::oseen_frank(m.K, nv, G) - theta[p] * dW_dtheta(m, nv, G);
  }
  return out;
}

ScalarField total_energy(const VectorField& u, const ScalarField& theta, const VectorField& n,
                         const TensorField& grad_n, const CoefficientSet& c, double rho) {
  ScalarField e = internal_energy(theta, n, grad_n, c);
  for (std::size_t p = 0; p < e.size(); ++p) e[p] += 0.5 * rho * vec_at(u, p).squaredNorm();
  return e;
}

ScalarField entropy_production(const ScalarField& theta, const VectorField& grad_theta, const VectorField& n,
                               const VectorField& N, const TensorField& D, const CoefficientSet& c) {
  require_positive_temperature(theta);
  ScalarField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    const Vec3 nv = vec_at(n, p);
    const Vec3 gt = vec_at(grad_theta, p);
    const double mech = pointwise::mechanical_dissipation(m.alpha, nv, vec_at(N, p), mat_at(D, p), false);
    out[p] = mech + pointwise::heat_flux(m.lambda1, m.lambda2, nv, gt).dot(gt) / theta[p];
  }
  return out;
}

VectorField work_flux(const VectorField& u, const ScalarField& theta, const VectorField& n,
                      const VectorField& dn_dt, const TensorField& grad_n, const ScalarField& pressure,
                      const CoefficientSet& c) {
  require_positive_temperature(theta);
  const TensorField grad_u = gradient(u);
  VectorField out(theta.grid());
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const MaterialValues m = c.at(theta[p]);
    const Vec3 uv = vec_at(u, p);
    const Vec3 nv = vec_at(n, p);
    const Mat3 G = mat_at(grad_n, p);
    const Mat3 Gu = mat_at(grad_u, p);
    const Mat3 D = 0.5 * (Gu + Gu.transpose());
    const Mat3 W = 0.5 * (Gu - Gu.transpose());
    const Vec3 ndot = vec_at(dn_dt, p) + G * uv;
    const Vec3 N = ndot - W * nv;
    const Mat3 P = pointwise::frank_stress(m.K, nv, G);
    const Mat3 T = -pressure[p] * Mat3::Identity() - G.transpose() * P +
                   pointwise::leslie_stress(m.alpha, nv, N, D, false);
    const double e_tot = theta[p] + pointwise::oseen_frank(m.K, nv, G) - theta[p] * dW_dtheta(m, nv, G) +
                         0.5 * uv.squaredNorm();
    put(out, p, T.transpose() * uv + P.transpose() * ndot - uv * e_tot);
  }
  return out;
}

}  // namespace nematic
