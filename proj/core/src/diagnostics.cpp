#include "nematic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nematic/constitutive.hpp"
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

SecondLawAudit audit_with(const SimState& s, const VectorField& N, const TensorField& D, const VectorField& grad_theta,
                          const CoefficientSet& c) {
  require_positive_temperature(s.theta);
  SecondLawAudit a;
  a.min_production = INFINITY;
  a.max_production = -INFINITY;
  a.mechanical_min = INFINITY;
  a.thermal_min = INFINITY;
  ScalarField rate(s.grid());
  for (std::size_t p = 0; p < s.theta.size(); ++p) {
    const MaterialValues m = c.at(s.theta[p]);
    const Vec3 n = vec_at(s.n, p);
    const Vec3 Nv = vec_at(N, p);
    const Mat3 Dv = mat_at(D, p);
    const Vec3 gt = vec_at(grad_theta, p);
    const double mech = pointwise::mechanical_dissipation<Vec3, Mat3>(m.alpha, n, Nv, Dv, false);
    const double therm = pointwise::heat_flux(m.lambda1, m.lambda2, n, gt).dot(gt) / s.theta[p];
    const double total = mech + therm;
    a.min_production = std::min(a.min_production, total);
    a.max_production = std::max(a.max_production, total);
    a.mechanical_min = std::min(a.mechanical_min, mech);
    a.thermal_min = std::min(a.thermal_min, therm);
    rate[p] = total / s.theta[p];
    const Vec3 g = pointwise::kinematic_transport<Vec3, Mat3>(m.gamma1, m.gamma2, n, Nv, Dv);
    const double identity = m.gamma1 * Nv.squaredNorm() + m.gamma2 * Nv.dot(Dv * n);
    a.identity_gap = std::max(a.identity_gap, std::abs(g.dot(Nv) - identity));
  }
  a.integral = integral(rate);
  return a;
}

}  // namespace

double total_entropy(const SimState& s, const CoefficientSet& c) {
  return integral(entropy(s.theta, s.n, gradient(s.n), c));
}

double total_energy(const SimState& s, const CoefficientSet& c) {
  return integral(total_energy(s.u, s.theta, s.n, gradient(s.n), c));
}

ScalarField first_law_residual(const SimState& prev, const SimState& next, const CoefficientSet& c,
                               Subsystem subsystem) {
  const double dt = next.t - prev.t;
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "first-law residual needs increasing times");
  const ScalarField e1 = total_energy(next.u, next.theta, next.n, gradient(next.n), c);
  const ScalarField e0 = total_energy(prev.u, prev.theta, prev.n, gradient(prev.n), c);
  const StateAnalysis a = analyze(next, c, subsystem);
  const VectorField sigma = work_flux(next.u, next.theta, next.n, a.dn, a.grad_n, a.pressure, c);
  const VectorField q = heat_flux(next.theta, a.grad_theta, next.n, c);
  const ScalarField div_total = divergence(sigma + q);
  ScalarField r(next.grid());
  for (std::size_t p = 0; p < r.size(); ++p) r[p] = (e1[p] - e0[p]) / dt - div_total[p];
  return r;
}

SecondLawAudit second_law_audit(const SimState& s, const CoefficientSet& c, Subsystem subsystem) {
  const StateAnalysis a = analyze(s, c, subsystem);
  return audit_with(s, a.N, a.D, a.grad_theta, c);
}

SecondLawAudit second_law_audit(const SimState& s, const VectorField& N, const CoefficientSet& c) {
  const StrainVorticity sv = strain_and_vorticity(gradient(s.u));
  return audit_with(s, N, sv.D, gradient(s.theta), c);
}

std::vector<EntropyStep> entropy_balance(const std::vector<SimState>& trajectory, const CoefficientSet& c,
                                         Subsystem subsystem) {
  std::vector<EntropyStep> out;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    EntropyStep e;
    e.t = trajectory[k].t;
    e.entropy = total_entropy(trajectory[k], c);
    if (k > 0) {
      const double dt = trajectory[k].t - trajectory[k - 1].t;
      e.change = e.entropy - out.back().entropy;
      e.production = second_law_audit(trajectory[k], c, subsystem).integral * dt;
      e.gap = std::abs(e.change - e.production);
    }
    out.push_back(e);
  }
  return out;
}

DiagnosticsRecord diagnose(std::size_t step, const SimState& s, const SimState* prev, const CoefficientSet& c,
                           const StepReport& report, Subsystem subsystem) {
  DiagnosticsRecord r;
  r.step = step;
  r.t = s.t;
  const StateAnalysis a = analyze(s, c, subsystem);
  const SecondLawAudit audit = audit_with(s, a.N, a.D, a.grad_theta, c);
  r.total_energy = integral(total_energy(s.u, s.theta, s.n, a.grad_n, c));
  r.total_entropy = integral(entropy(s.theta, s.n, a.grad_n, c));
  r.entropy_production_integral = audit.integral;
  r.min_pointwise_production = audit.min_production;
  r.max_pointwise_production = audit.max_production;
  r.mechanical_min = audit.mechanical_min;
  r.thermal_min = audit.thermal_min;
  r.dissipation_identity_gap = audit.identity_gap;
  double viol = 0.0, ke = 0.0;
  ScalarField kin(s.grid());
  for (std::size_t p = 0; p < s.theta.size(); ++p) {
    const Vec3 n = vec_at(s.n, p);
    viol = std::max(viol, std::abs(n.squaredNorm() - 1.0));
    kin[p] = 0.5 * vec_at(s.u, p).squaredNorm();
  }
  ke = integral(kin);
  r.constraint_violation = viol;
  r.constraint_drift = report.constraint_drift;
  r.kinetic_energy = ke;
  r.max_div_u = max_abs(divergence(s.u));
  const auto [lo, hi] = std::minmax_element(s.theta.values().begin(), s.theta.values().end());
  r.min_theta = *lo;
  r.max_theta = *hi;
  r.picard_iterations = report.picard_iterations;
  if (prev) r.first_law_residual_norm = l2_norm(first_law_residual(*prev, s, c, subsystem));
  return r;
}

const std::string& csv_header() {
  static const std::string h =
      "step,t,total_energy,total_entropy,entropy_production_integral,min_pointwise_production,"
      "max_pointwise_production,mechanical_min,thermal_min,constraint_violation,constraint_drift,"
      "first_law_residual_norm,dissipation_identity_gap,kinetic_energy,max_div_u,min_theta,max_theta,"
      "picard_iterations";
  return h;
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  os << r.step;
  num(r.t);
  num(r.total_energy);
  num(r.total_entropy);
  num(r.entropy_production_integral);
  num(r.min_pointwise_production);
  num(r.max_pointwise_production);
  num(r.mechanical_min);
  num(r.thermal_min);
  num(r.constraint_violation);
  num(r.constraint_drift);
  num(r.first_law_residual_norm);
  num(r.dissipation_identity_gap);
  num(r.kinetic_energy);
  num(r.max_div_u);
  num(r.min_theta);
  num(r.max_theta);
  os << ',' << r.picard_iterations << '\n';
}

}  // namespace nematic
