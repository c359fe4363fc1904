#include "nematic/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nematic/besov.hpp"
#include "nematic/constitutive.hpp"
#include "nematic/error.hpp"
#include "nematic/threads.hpp"

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

Vec3 to_vec(const Point& p) { return Vec3(p[0], p[1], p[2]); }

std::vector<MaterialValues> materials(const ScalarField& theta, const CoefficientSet& c) {
  std::vector<MaterialValues> m(theta.size());
  parallel_for(theta.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) m[p] = c.at(theta[p]);
  });
  return m;
}

Mat3 projector(const Vec3& xi) {
  const double k2 = xi.squaredNorm();
  return k2 > 0.0 ? Mat3(Mat3::Identity() - xi * xi.transpose() / k2) : Mat3(Mat3::Identity());
}

/// Orthonormal basis (columns) of the complement of `a` inside the first d axes.
Eigen::MatrixXd complement_basis(const Vec3& a, int d) {
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd av = a.head(d).normalized();
  Eigen::MatrixXd m(d, d);
  m.col(0) = av;
  for (int i = 1; i < d; ++i) m.col(i) = full.col(i - 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd out(3, d - 1);
  out.setZero();
  out.topRows(d) = q.rightCols(d - 1);
  return out;
}

double largest_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  return es.eigenvalues().maxCoeff();
}

Vec3 director_linear_term(const MaterialValues& m, const Vec3& xi, const Vec3& v) {
  return -(m.K[0] * xi.squaredNorm() * v + (m.K[1] + m.K[3]) * xi * xi.dot(v));
}

std::vector<Vec3> sample_directions(int d) {
  std::vector<Vec3> out;
  for (int a = 0; a < d; ++a) out.push_back(Vec3::Unit(a));
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> g;
  for (int i = 0; i < 96; ++i) {
    Vec3 x(g(rng), g(rng), d == 3 ? g(rng) : 0.0);
    if (x.norm() > 1e-8) out.push_back(x.normalized());
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

}  // namespace

const char* scheme_name(Scheme s) { return s == Scheme::Imex1 ? "imex1" : "picard"; }

const char* subsystem_name(Subsystem s) {
  switch (s) {
    case Subsystem::Full: return "full";
    case Subsystem::Stokes: return "stokes";
    case Subsystem::Heat: return "heat";
  }
  return "full";
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::Config, "dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::Config, "t_end must be non-negative");
  if (!(picard_tol > 0.0)) throw Error(ErrorCode::Config, "picard_tol must be positive");
  if (picard_max_iters < 1) throw Error(ErrorCode::Config, "picard_max_iters must be at least 1");
  if (snapshot_stride < 0 || diagnostics_stride < 0) throw Error(ErrorCode::Config, "strides must be non-negative");
  if (!(gamma_min > 0.0)) throw Error(ErrorCode::Config, "gamma_min must be positive");
  if (!(constraint_tol > 0.0)) throw Error(ErrorCode::Config, "constraint_tol must be positive");
  if (theta_min < 0.0) throw Error(ErrorCode::Config, "theta_min must be non-negative");
}

std::size_t SolverConfig::step_count() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

EllipticityReport check_ellipticity(const CoefficientSet& c, int dim, double gamma_min, double theta_lo,
                                    double theta_hi) {
  EllipticityReport r;
  const MaterialValues m = c.at(c.theta_ref);
  const Vec3 nb = to_vec(c.n_ref);

  r.gamma1_min = m.gamma1;
  if (theta_hi < theta_lo) std::swap(theta_lo, theta_hi);
  for (int i = 0; i <= 64; ++i) {
    const double th = theta_lo + (theta_hi - theta_lo) * i / 64.0;
    r.gamma1_min = std::min(r.gamma1_min, c.at(th).gamma1);
  }

  r.literal = {{"K1 > 0", m.K[0]},
               {"K1 - 2(K2+K4) - K3 > 0", m.K[0] - 2.0 * (m.K[1] + m.K[3]) - m.K[2]},
               {"lambda1 > 0", m.lambda1},
               {"lambda1 + lambda2 > 0", m.lambda1 + m.lambda2},
               {"alpha4 > 0", m.alpha[4]},
               {"gamma1 - gamma_min > 0", r.gamma1_min - gamma_min}};
  for (const auto& mg : r.literal)
    if (!(mg.value > 0.0)) r.failures.push_back("violated: " + mg.name);

  double l_mom = INFINITY, l_heat = INFINITY, l_dir = INFINITY, l_lit = INFINITY;
  const Eigen::MatrixXd nperp = complement_basis(nb, dim);
  for (const Vec3& xi : sample_directions(dim)) {
    const Eigen::MatrixXd xperp = complement_basis(xi, dim);
    const Mat3 P = projector(xi);
    Eigen::MatrixXd A(dim - 1, dim - 1);
    for (int j = 0; j < dim - 1; ++j) {
      const Vec3 v = xperp.col(j);
      const Mat3 Dr = 0.5 * (v * xi.transpose() + xi * v.transpose());
      const Mat3 Wr = 0.5 * (v * xi.transpose() - xi * v.transpose());
      const Vec3 N = Wr * nb;
      const Mat3 s = pointwise::leslie_stress<Vec3, Mat3>(m.alpha, nb, N, Mat3(-Dr), false);
      const Vec3 out = P * (s * xi);
      A.col(j) = xperp.transpose() * out;
    }
    l_mom = std::min(l_mom, -largest_symmetric_eigenvalue(A));

    const double nx = nb.dot(xi);
    l_heat = std::min(l_heat, m.lambda1 + m.lambda2 * nx * nx);

    const Mat3 Pn = Mat3::Identity() - nb * nb.transpose();
    Eigen::MatrixXd C(dim - 1, dim - 1);
    for (int j = 0; j < dim - 1; ++j) {
      const Vec3 v = nperp.col(j);
      const Vec3 out = Pn * (director_linear_term(m, xi, v) - m.K[2] * nx * nx * v) / m.gamma1;
      C.col(j) = nperp.transpose() * out;
    }
    l_dir = std::min(l_dir, -largest_symmetric_eigenvalue(C));

    Eigen::MatrixXd CL(dim, dim);
    for (int j = 0; j < dim; ++j) {
      const Vec3 v = Vec3::Unit(j);
      const Vec3 out = -(m.K[0] + m.K[2] * nx * nx) * v -
                       (m.K[1] + m.K[3]) * (Mat3::Identity() + nb * nb.transpose()) * xi * xi.dot(v);
      CL.col(j) = out.head(dim);
    }
    l_lit = std::min(l_lit, -largest_symmetric_eigenvalue(CL));
  }
  r.lambda0_momentum = l_mom;
  r.lambda0_heat = l_heat;
  r.lambda0_director = m.gamma1 > 0.0 ? l_dir : -INFINITY;
  r.lambda0_director_literal = l_lit;
  if (!(r.lambda0_momentum > 0.0)) r.failures.push_back("momentum symbol not strongly elliptic");
  if (!(r.lambda0_heat > 0.0)) r.failures.push_back("heat symbol not strongly elliptic");
  if (!(r.lambda0_director > 0.0)) r.failures.push_back("director symbol not strongly elliptic");
  r.ok = r.failures.empty();
  return r;
}

LinearOperators::LinearOperators(GridPtr grid, const CoefficientSet& c, Subsystem subsystem)
    : grid_(std::move(grid)) {
  const Grid& g = *grid_;
  const int d = g.dim();
  const int B = 2 * d;
  const MaterialValues m = c.at(c.theta_ref);
  const Vec3 nb = to_vec(c.n_ref);
  const Mat3 Pn = Mat3::Identity() - nb * nb.transpose();
  flow_.assign(g.spectral_size() * B * B, 0.0);
  heat_.assign(g.spectral_size(), 0.0);
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    const Vec3 xi = to_vec(g.derivative_symbol(k));
    const double nx = nb.dot(xi);
    if (subsystem != Subsystem::Stokes) heat_[k] = -(m.lambda1 * xi.squaredNorm() + m.lambda2 * nx * nx);
    if (subsystem == Subsystem::Heat) continue;
    const Mat3 P = projector(xi);
    double* L = &flow_[k * B * B];
    for (int col = 0; col < B; ++col) {
      Vec3 v = Vec3::Zero(), mm = Vec3::Zero();
      if (col < d)
        v[col] = 1.0;
      else
        mm[col - d] = 1.0;
      v = P * v;
      const Mat3 Dr = 0.5 * (v * xi.transpose() + xi * v.transpose());
      const Mat3 Wr = 0.5 * (v * xi.transpose() - xi * v.transpose());
      Vec3 N, dm = Vec3::Zero();
      if (subsystem == Subsystem::Full) {
        const Vec3 C0 = director_linear_term(m, xi, mm) - m.K[2] * nx * nx * mm;
        N = (Pn * C0 + m.gamma2 * Pn * Dr * nb) / m.gamma1;
        dm = N - Wr * nb;
      } else {
        N = Wr * nb;
      }
      const Mat3 s = pointwise::leslie_stress<Vec3, Mat3>(m.alpha, nb, N, Mat3(-Dr), false);
      const Vec3 dv = P * (s * xi);
      for (int row = 0; row < d; ++row) {
        L[row * B + col] = dv[row];
        L[(d + row) * B + col] = dm[row];
      }
    }
  }
}

std::vector<Spectrum> LinearOperators::apply(const std::vector<Spectrum>& y) const {
  const Grid& g = *grid_;
  const int d = g.dim();
  const int B = 2 * d;
  std::vector<Spectrum> out;
  for (const auto& s : y) out.push_back(Spectrum{s.grid, std::vector<Complex>(g.spectral_size())});
  const Complex I(0.0, 1.0);
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    const double* L = flow_block(k);
    Complex x[6];
    for (int i = 0; i < d; ++i) {
      x[i] = -I * y[i].coeffs[k];
      x[d + i] = y[d + i].coeffs[k];
    }
    for (int r = 0; r < B; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c < B; ++c) acc += L[r * B + c] * x[c];
      out[r].coeffs[k] = r < d ? I * acc : acc;
    }
    out[B].coeffs[k] = heat_[k] * y[B].coeffs[k];
  }
  return out;
}

void LinearOperators::factor(double dt) const {
  if (dt == factored_dt_) return;
  const Grid& g = *grid_;
  const int B = block();
  inverse_.assign(g.spectral_size() * B * B, 0.0);
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(B, B);
    const double* L = flow_block(k);
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < B; ++c) M(r, c) -= dt * L[r * B + c];
    const Eigen::MatrixXd inv = M.partialPivLu().inverse();
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < B; ++c) inverse_[k * B * B + r * B + c] = inv(r, c);
  }
  factored_dt_ = dt;
}

void LinearOperators::solve(double dt, std::vector<Spectrum>& rhs) const {
  factor(dt);
  const Grid& g = *grid_;
  const int d = g.dim();
  const int B = 2 * d;
  const Complex I(0.0, 1.0);
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    const double* R = &inverse_[k * B * B];
    Complex x[6];
    for (int i = 0; i < d; ++i) {
      x[i] = -I * rhs[i].coeffs[k];
      x[d + i] = rhs[d + i].coeffs[k];
    }
    for (int r = 0; r < B; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c < B; ++c) acc += R[r * B + c] * x[c];
      rhs[r].coeffs[k] = r < d ? I * acc : acc;
    }
    rhs[B].coeffs[k] /= 1.0 - dt * heat_[k];
  }
}

StateAnalysis analyze(const SimState& s, const CoefficientSet& c, Subsystem subsystem, double gamma_min) {
  const GridPtr& gp = s.grid();
  require_same_grid(gp, s.u.grid());
  require_same_grid(gp, s.n.grid());
  require_positive_temperature(s.theta);
  const std::size_t size = gp->size();
  const bool full = subsystem == Subsystem::Full;

  StateAnalysis a;
  a.grad_u = gradient(s.u);
  a.grad_n = gradient(s.n);
  a.grad_theta = gradient(s.theta);
  StrainVorticity sv = strain_and_vorticity(a.grad_u);
  a.D = std::move(sv.D);
  a.Omega = std::move(sv.Omega);
  const std::vector<MaterialValues> mat = materials(s.theta, c);

  TensorField P(gp);
  VectorField dWdn(gp);
  if (full) {
    parallel_for(size, [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p) {
        const Vec3 n = vec_at(s.n, p);
        const Mat3 G = mat_at(a.grad_n, p);
        put(P, p, pointwise::frank_stress(mat[p].K, n, G));
        put(dWdn, p, pointwise::frank_director_derivative(mat[p].K, n, G));
      }
    });
  }
  const VectorField divP = full ? divergence(P) : VectorField(gp);

  a.N = VectorField(gp);
  a.n_dot = VectorField(gp);
  a.dn = VectorField(gp);
  TensorField sigma(gp);
  VectorField q(gp), advection(gp);
  ScalarField source(gp);  // dissipation for the temperature equation
  a.heat_capacity = ScalarField(gp);
  parallel_for(size, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const MaterialValues& m = mat[p];
      const Vec3 n = vec_at(s.n, p);
      const Vec3 u = vec_at(s.u, p);
      const Mat3 G = mat_at(a.grad_n, p);
      const Mat3 D = mat_at(a.D, p);
      const Mat3 W = mat_at(a.Omega, p);
      a.heat_capacity[p] = 1.0 - s.theta[p] * pointwise::oseen_frank(m.d2K, n, G);
      put(q, p, pointwise::heat_flux(m.lambda1, m.lambda2, n, vec_at(a.grad_theta, p)));
      if (subsystem == Subsystem::Heat) {
        put(a.N, p, -W * n);
        continue;
      }
      Vec3 N;
      if (full) {
        if (!(m.gamma1 >= gamma_min))
          throw Error(ErrorCode::Ellipticity, "gamma1 = " + std::to_string(m.gamma1) + " below gamma_min at sample " +
                                                  std::to_string(p));
        const Mat3 Pn = Mat3::Identity() - n * n.transpose() / n.squaredNorm();
        const Vec3 h = vec_at(dWdn, p) - vec_at(divP, p);
        N = -(Pn * h + m.gamma2 * Pn * D * n) / m.gamma1;
        const Vec3 ndot = N + W * n;
        put(a.n_dot, p, ndot);
        put(a.dn, p, ndot - G * u);
        put(advection, p, mat_at(a.grad_u, p) * u);
      } else {
        N = -W * n;
      }
      put(a.N, p, N);
      const Mat3 sl = pointwise::leslie_stress<Vec3, Mat3>(m.alpha, n, N, D, false);
      const Mat3 se = full ? Mat3(-G.transpose() * pointwise::frank_stress(m.K, n, G)) : Mat3::Zero();
      put(sigma, p, se + sl);
      if (full) source[p] = pointwise::mechanical_dissipation<Vec3, Mat3>(m.alpha, n, N, D, false);
    }
  });
  for (std::size_t p = 0; p < size; ++p)
    if (!(a.heat_capacity[p] > 0.0))
      throw Error(ErrorCode::BlowUp, "heat capacity not positive at sample " + std::to_string(p));

  if (full && !c.frank_isothermal()) {
    // theta (dW_theta/dn . n_dot + dP/dtheta : D_t grad n), D_t grad n = grad n_dot - grad n grad u.
    const TensorField grad_ndot = gradient(a.n_dot);
    parallel_for(size, [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p) {
        const MaterialValues& m = mat[p];
        const Vec3 n = vec_at(s.n, p);
        const Mat3 G = mat_at(a.grad_n, p);
        const Mat3 DtG = mat_at(grad_ndot, p) - G * mat_at(a.grad_u, p);
        const double coupling = pointwise::frank_director_derivative(m.dK, n, G).dot(vec_at(a.n_dot, p)) +
                                (pointwise::frank_stress(m.dK, n, G).array() * DtG.array()).sum();
        source[p] += s.theta[p] * coupling;
      }
    });
  }

  const Grid& g = *gp;
  const int d = g.dim();
  a.du = VectorField(gp);
  a.pressure = ScalarField(gp);
  if (subsystem != Subsystem::Heat) {
    VectorField f = divergence(sigma);
    f -= advection;
    std::vector<Spectrum> fs;
    for (int i = 0; i < d; ++i) fs.push_back(forward(f[i]));
    Spectrum ps{gp, std::vector<Complex>(g.spectral_size())};
    for (std::size_t k = 0; k < g.spectral_size(); ++k) {
      const double k2 = g.derivative_norm2(k);
      if (k2 == 0.0) continue;
      const Point& xi = g.derivative_symbol(k);
      Complex dot = 0.0;
      for (int i = 0; i < d; ++i) dot += xi[i] * fs[i].coeffs[k];
      for (int i = 0; i < d; ++i) fs[i].coeffs[k] -= xi[i] * dot / k2;
      ps.coeffs[k] = Complex(0.0, -1.0) * dot / k2;
    }
    for (int i = 0; i < d; ++i) a.du[i] = inverse(fs[i]);
    a.pressure = inverse(ps);
  }

  a.dtheta = ScalarField(gp);
  if (subsystem != Subsystem::Stokes) {
    const ScalarField divq = divergence(q);
    for (std::size_t p = 0; p < size; ++p) {
      const double ug = vec_at(s.u, p).dot(vec_at(a.grad_theta, p));
      a.dtheta[p] = (divq[p] + source[p]) / a.heat_capacity[p] - ug;
    }
  }
  return a;
}

Integrator::Integrator(GridPtr grid, CoefficientSet c, SolverConfig cfg)
    : grid_(std::move(grid)), c_(std::move(c)), cfg_(std::move(cfg)), ops_(grid_, c_, cfg_.subsystem) {
  cfg_.validate();
  c_.validate(grid_->dim());
}

double Integrator::theta_floor() const { return cfg_.theta_min > 0.0 ? cfg_.theta_min : c_.theta_ref / 10.0; }

std::vector<Spectrum> Integrator::to_spectra(const SimState& s) const {
  const int d = grid_->dim();
  std::vector<Spectrum> y;
  for (int i = 0; i < d; ++i) y.push_back(forward(s.u[i]));
  for (int i = 0; i < d; ++i) {
    y.push_back(forward(s.n[i]));
    y.back().coeffs[0] -= c_.n_ref[i];
  }
  y.push_back(forward(s.theta));
  y.back().coeffs[0] -= c_.theta_ref;
  return y;
}

SimState Integrator::from_spectra(const std::vector<Spectrum>& y, double t) const {
  const int d = grid_->dim();
  SimState s;
  s.t = t;
  std::vector<ScalarField> u, n;
  for (int i = 0; i < d; ++i) u.push_back(inverse(y[i]));
  for (int i = 0; i < d; ++i) {
    Spectrum m = y[d + i];
    m.coeffs[0] += c_.n_ref[i];
    n.push_back(inverse(m));
  }
  Spectrum th = y[2 * d];
  th.coeffs[0] += c_.theta_ref;
  s.u = VectorField(std::move(u));
  s.n = VectorField(std::move(n));
  s.theta = inverse(th);
  s.p = ScalarField(grid_);
  return s;
}

std::vector<Spectrum> Integrator::rates(const SimState& s, ScalarField* pressure) const {
  const Grid& g = *grid_;
  const int d = g.dim();
  StateAnalysis a = analyze(s, c_, cfg_.subsystem, cfg_.gamma_min);
  if (cfg_.forcing) {
    a.du += cfg_.forcing->u;
    a.dn += cfg_.forcing->n;
    a.dtheta += cfg_.forcing->theta;
  }
  if (pressure) *pressure = a.pressure;
  std::vector<Spectrum> raw;
  for (int i = 0; i < d; ++i) raw.push_back(forward(a.du[i]));
  for (int i = 0; i < d; ++i) raw.push_back(forward(a.dn[i]));
  raw.push_back(forward(a.dtheta));
  const std::vector<Spectrum> Ly = ops_.apply(to_spectra(s));
  for (std::size_t c = 0; c < raw.size(); ++c)
    for (std::size_t k = 0; k < g.spectral_size(); ++k)
      raw[c].coeffs[k] = g.dealias_keep(k) ? raw[c].coeffs[k] : Ly[c].coeffs[k];

  if (cfg_.subsystem == Subsystem::Full) {
    std::vector<ScalarField> dn;
    for (int i = 0; i < d; ++i) dn.push_back(inverse(raw[d + i]));
    VectorField rate(std::move(dn));
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p) {
        const Vec3 n = vec_at(s.n, p);
        const Vec3 r = vec_at(rate, p);
        put(rate, p, r - n * (n.dot(r) / n.squaredNorm()));
      }
    });
    for (int i = 0; i < d; ++i) raw[d + i] = forward(rate[i]);
  }
  return raw;
}

Residual Integrator::residual(const SimState& s) const {
  const int d = grid_->dim();
  std::vector<Spectrum> F = rates(s);
  const std::vector<Spectrum> Ly = ops_.apply(to_spectra(s));
  for (std::size_t c = 0; c < F.size(); ++c)
    for (std::size_t k = 0; k < F[c].coeffs.size(); ++k) F[c].coeffs[k] -= Ly[c].coeffs[k];
  std::vector<ScalarField> u, n;
  for (int i = 0; i < d; ++i) u.push_back(inverse(F[i]));
  for (int i = 0; i < d; ++i) n.push_back(inverse(F[d + i]));
  return Residual{VectorField(std::move(u)), VectorField(std::move(n)), inverse(F[2 * d])};
}

SimState Integrator::finish(SimState s, StepReport* report) const {
  for (int i = 0; i < s.u.dim(); ++i)
    if (!all_finite(s.u[i]) || !all_finite(s.n[i])) throw Error(ErrorCode::BlowUp, "non-finite state after step");
  if (!all_finite(s.theta)) throw Error(ErrorCode::BlowUp, "non-finite temperature after step");
  const double floor = theta_floor();
  for (std::size_t p = 0; p < s.theta.size(); ++p)
    if (!(s.theta[p] > floor)) {
      std::ostringstream os;
      os << "temperature " << s.theta[p] << " below floor " << floor << " at sample " << p << ", t = " << s.t;
      throw Error(ErrorCode::BlowUp, os.str());
    }
  Renormalized r = renormalize_director(s.n);
  if (report) report->constraint_drift = r.max_deviation;
  if (cfg_.renormalize_director) {
    if (r.max_deviation > cfg_.constraint_tol) {
      std::ostringstream os;
      os << "director drift " << r.max_deviation << " exceeds tolerance " << cfg_.constraint_tol << " at t = " << s.t;
      throw Error(ErrorCode::ConstraintViolation, os.str());
    }
    s.n = std::move(r.n);
  }
  return s;
}

SimState Integrator::step_imex(const SimState& s, StepReport* report) const {
  std::vector<Spectrum> y = to_spectra(s);
  ScalarField p;
  std::vector<Spectrum> F = rates(s, &p);
  ops_.solve(cfg_.dt, F);
  for (std::size_t c = 0; c < y.size(); ++c)
    for (std::size_t k = 0; k < y[c].coeffs.size(); ++k) y[c].coeffs[k] += cfg_.dt * F[c].coeffs[k];
  SimState out = from_spectra(y, s.t + cfg_.dt);
  out.p = std::move(p);
  if (report) {
    report->picard_iterations = 0;
    report->picard_differences.clear();
  }
  return finish(std::move(out), report);
}

namespace {

/// Intersection norms of a spectral perturbation plus the magnitudes of its zero modes.
double modal_norm(const std::vector<Spectrum>& y, int d) {
  std::vector<ScalarField> u, m;
  double zero = 0.0;
  for (int i = 0; i < d; ++i) u.push_back(inverse(y[i]));
  for (int i = 0; i < d; ++i) m.push_back(inverse(y[d + i]));
  for (const auto& s : y) zero += std::abs(s.coeffs[0]);
  return state_norms(VectorField(std::move(u)), inverse(y[2 * d]), VectorField(std::move(m))).sum() + zero;
}

}  // namespace

SimState Integrator::step_picard(const SimState& s, StepReport* report) const {
  const int d = grid_->dim();
  const double dt = cfg_.dt;
  const std::vector<Spectrum> yn = to_spectra(s);
  ScalarField p;
  auto picard_map = [&](const SimState& it) {
    std::vector<Spectrum> F = rates(it, &p);
    const std::vector<Spectrum> Ly = ops_.apply(to_spectra(it));
    std::vector<Spectrum> rhs = yn;
    for (std::size_t c = 0; c < rhs.size(); ++c)
      for (std::size_t k = 0; k < rhs[c].coeffs.size(); ++k)
        rhs[c].coeffs[k] += dt * (F[c].coeffs[k] - Ly[c].coeffs[k]);
    ops_.solve(dt, rhs);
    return rhs;
  };
  std::vector<Spectrum> y = picard_map(s);
  StepReport local;
  bool converged = false;
  for (int j = 1; j <= cfg_.picard_max_iters; ++j) {
    SimState it = from_spectra(y, s.t + dt);
    std::vector<Spectrum> next = picard_map(it);
    std::vector<Spectrum> diff = next;
    for (std::size_t c = 0; c < diff.size(); ++c)
      for (std::size_t k = 0; k < diff[c].coeffs.size(); ++k) diff[c].coeffs[k] -= y[c].coeffs[k];
    const double dn = modal_norm(diff, d);
    local.picard_differences.push_back(dn);
    local.picard_iterations = j;
    y = std::move(next);
    if (dn <= cfg_.picard_tol * (1.0 + modal_norm(y, d))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "Picard iteration did not converge in " << cfg_.picard_max_iters << " iterations at t = " << s.t
       << ", last difference " << local.picard_differences.back();
    throw Error(ErrorCode::PicardNonConvergence, os.str());
  }
  SimState out = from_spectra(y, s.t + dt);
  out.p = std::move(p);
  out = finish(std::move(out), &local);
  if (report) *report = local;
  return out;
}

SimState Integrator::step(const SimState& s, StepReport* report) const {
  return cfg_.scheme == Scheme::Picard ? step_picard(s, report) : step_imex(s, report);
}

Residual rhs_nonlinear(const SimState& s, const CoefficientSet& c, Subsystem subsystem) {
  SolverConfig cfg;
  cfg.subsystem = subsystem;
  return Integrator(s.grid(), c, cfg).residual(s);
}

SimState step_imex(const SimState& s, double dt, const CoefficientSet& c) {
  SolverConfig cfg;
  cfg.dt = dt;
  return Integrator(s.grid(), c, cfg).step_imex(s);
}

SimState step_picard(const SimState& s, double dt, const CoefficientSet& c, const SolverConfig& cfg,
                     StepReport* report) {
  SolverConfig local = cfg;
  local.dt = dt;
  local.scheme = Scheme::Picard;
  return Integrator(s.grid(), c, local).step_picard(s, report);
}

Renormalized renormalize_director(const VectorField& n) {
  Renormalized r{n, 0.0};
  for (std::size_t p = 0; p < n.grid()->size(); ++p) {
    const Vec3 v = vec_at(n, p);
    const double nn = v.squaredNorm();
    if (!(nn > 1e-24)) throw Error(ErrorCode::SingularDirector, "director vanishes at sample " + std::to_string(p));
    r.max_deviation = std::max(r.max_deviation, std::abs(nn - 1.0));
    put(r.n, p, v / std::sqrt(nn));
  }
  return r;
}

RunResult run(const SimState& initial, const CoefficientSet& c, const SolverConfig& cfg,
              const StepObserver& observer) {
  cfg.validate();
  const auto [lo, hi] = std::minmax_element(initial.theta.values().begin(), initial.theta.values().end());
  const EllipticityReport er =
      check_ellipticity(c, initial.grid()->dim(), cfg.gamma_min, std::min(*lo, c.theta_ref), std::max(*hi, c.theta_ref));
  if (!er.ok) throw Error(ErrorCode::Ellipticity, join(er.failures));
  const Integrator integ(initial.grid(), c, cfg);
  RunResult out;
  out.final_state = initial;
  if (observer) observer(0, initial, StepReport{});
  const std::size_t steps = cfg.step_count();
  for (std::size_t i = 1; i <= steps; ++i) {
    StepReport rep;
    out.final_state = integ.step(out.final_state, &rep);
    out.final_state.t = initial.t + static_cast<double>(i) * cfg.dt;
    out.reports.push_back(rep);
    if (observer) observer(i, out.final_state, rep);
  }
  out.steps = steps;
  return out;
}

std::shared_ptr<const Forcing> stationary_forcing(const SimState& exact, const CoefficientSet& c,
                                                  Subsystem subsystem, int refine) {
  if (refine < 1) throw Error(ErrorCode::InvalidArgument, "refinement factor must be at least 1");
  const Grid& g = *exact.grid();
  std::vector<int> res;
  std::vector<double> per;
  for (int a = 0; a < g.dim(); ++a) {
    res.push_back(g.resolution(a) * refine);
    per.push_back(g.period(a));
  }
  const GridPtr fine = Grid::make(g.dim(), res, per);
  SimState f;
  f.t = exact.t;
  f.u = resample(exact.u, fine);
  f.n = resample(exact.n, fine);
  f.theta = resample(exact.theta, fine);
  f.p = ScalarField(fine);
  const StateAnalysis a = analyze(f, c, subsystem);
  auto out = std::make_shared<Forcing>();
  out->u = resample(a.du, exact.grid());
  out->n = resample(a.dn, exact.grid());
  out->theta = resample(a.dtheta, exact.grid());
  out->u *= -1.0;
  out->n *= -1.0;
  out->theta *= -1.0;
  return out;
}

}  // namespace nematic
