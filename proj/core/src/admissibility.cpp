#include "nematic/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nematic/constitutive.hpp"
#include "nematic/error.hpp"
#include "nematic/threads.hpp"

namespace nematic {

ViscositySample viscosity_sample(const CoefficientSet& c, double theta, int dim) {
  const MaterialValues m = c.at(theta);
  ViscositySample s;
  s.alpha = m.alpha;
  s.lambda1 = m.lambda1;
  s.lambda2 = m.lambda2;
  s.dim = dim;
  return s;
}

bool InequalityList::holds() const {
  return std::all_of(margins.begin(), margins.end(), [](const Margin& m) { return m.value >= 0.0; });
}

SemidefiniteResult semidefinite_check(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "semidefinite_check needs a square matrix");
  SemidefiniteResult r;
  if (m.rows() == 0) {
    r.ok = true;
    return r;
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  r.lambda_min = ev.minCoeff();
  r.norm = ev.cwiseAbs().maxCoeff();
  r.ok = r.lambda_min >= -1e-10 * r.norm;
  return r;
}

std::vector<double> leading_minors(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  for (Eigen::Index k = 1; k <= m.rows(); ++k) out.push_back(m.topLeftCorner(k, k).determinant());
  return out;
}

double structured_det(double x, double y, double z, int N) {
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "structured_det needs N >= 2");
  return std::pow(z - y, N - 2) * (x * z + (N - 2) * x * y - (N - 1) * y * y);
}

namespace {

double corner_a(const ViscositySample& s) {
  const auto& a = s.alpha;
  return a[1] + a[5] + a[6] + 2.0 * a[4];
}
double corner_c(const ViscositySample& s) {
  const auto& a = s.alpha;
  return a[0] + a[4] + a[7] + a[8];
}
double coupling_b(const ViscositySample& s) {
  const auto& a = s.alpha;
  return 0.5 * (a[0] + a[1] + a[8]);
}

}  // namespace

Eigen::MatrixXd build_matrix_M(const ViscositySample& s, int d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "matrix M needs d >= 2");
  const double a4 = s.alpha[4];
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j) m(i, j) = (i == j) ? 2.0 * a4 : a4;
  m(0, 0) = corner_a(s);
  m(d - 1, d - 1) = corner_c(s);
  m(0, d - 1) = m(d - 1, 0) = coupling_b(s);
  return m;
}

double det_M_closed_form(const ViscositySample& s, int d) {
  const auto& a = s.alpha;
  const double b = coupling_b(s);
  return std::pow(a[4], d - 2) * (corner_c(s) * ((d - 1) * (a[1] + a[5] + a[6]) + d * a[4]) - (d - 1) * b * b);
}

double det_M_printed(const ViscositySample& s, int d) {
  const auto& a = s.alpha;
  const double b = coupling_b(s);
  return std::pow(a[4], d - 2) *
         (a[4] * corner_c(s) * ((d - 1) * (a[1] + a[5] + a[6]) + d * a[4]) - (d - 1) * b * b);
}

double dissipation_form(const ViscositySample& s, const Eigen::VectorXd& n, const Eigen::VectorXd& N,
                        const Eigen::MatrixXd& D, bool compressible) {
  const auto& a = s.alpha;
  const Eigen::VectorXd Dn = D * n;
  const double nDn = n.dot(Dn);
  const double tr = D.trace();
  double q = a[1] * nDn * nDn + (a[2] + a[3] + a[6] - a[5]) * N.dot(Dn) + a[4] * D.squaredNorm() +
             (a[5] + a[6]) * Dn.squaredNorm() + s.gamma1() * N.squaredNorm();
  if (compressible) q += a[0] * nDn * tr + a[7] * tr * tr + a[8] * tr * nDn;
  return q;
}

namespace {

/// Orthonormal basis (Frobenius) of symmetric d x d matrices, traceless if requested.
std::vector<Eigen::MatrixXd> symmetric_basis(int d, bool traceless) {
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
      b(i, j) = b(j, i) = 1.0 / std::sqrt(2.0);
      basis.push_back(b);
    }
  if (traceless) {
    for (int k = 1; k < d; ++k) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
      const double w = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
      for (int i = 0; i < k; ++i) b(i, i) = w;
      b(k, k) = -k * w;
      basis.push_back(b);
    }
  } else {
    for (int i = 0; i < d; ++i) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
      b(i, i) = 1.0;
      basis.push_back(b);
    }
  }
  return basis;
}

/// Columns 1..d-1 of the Householder reflection sending e1 to n span the orthogonal complement of n.
template <class Vec, class Frame>
void complement_frame(const Vec& n, Frame& T) {
  const int d = static_cast<int>(n.size());
  Vec v = -n;
  v(0) += 1.0;
  const double vv = v.squaredNorm();
  for (int c = 1; c < d; ++c) {
    Vec e = Vec::Zero(d);
    e(c) = 1.0;
    if (vv > 1e-30) e -= (2.0 * v.dot(e) / vv) * v;
    T.col(c - 1) = e;
  }
}


}  // namespace

Eigen::MatrixXd dissipation_matrix(const ViscositySample& s, int d, bool compressible) {
  const auto basis = symmetric_basis(d, !compressible);
  const int m = (d - 1) + static_cast<int>(basis.size());
  Eigen::VectorXd n = Eigen::VectorXd::Zero(d);
  n(0) = 1.0;
  auto unpack = [&](const Eigen::VectorXd& x, Eigen::VectorXd& N, Eigen::MatrixXd& D) {
    N = Eigen::VectorXd::Zero(d);
    for (int i = 1; i < d; ++i) N(i) = x(i - 1);
    D = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t k = 0; k < basis.size(); ++k) D += x(d - 1 + static_cast<int>(k)) * basis[k];
  };
  auto form = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd N;
    Eigen::MatrixXd D;
    unpack(x, N, D);
    return dissipation_form(s, n, N, D, compressible);
  };
  Eigen::MatrixXd Q(m, m);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd ei = Eigen::VectorXd::Unit(m, i);
    Q(i, i) = form(ei);
    for (int j = 0; j < i; ++j) {
      const Eigen::VectorXd ej = Eigen::VectorXd::Unit(m, j);
      Q(i, j) = Q(j, i) = 0.25 * (form(ei + ej) - form(ei - ej));
    }
  }
  return Q;
}

HeatCheck check_heat(const ViscositySample& s) {
  HeatCheck h;
  h.lambda1 = {"lambda1 >= 0", s.lambda1};
  h.lambda_sum = {"lambda1+lambda2 >= 0", s.lambda1 + s.lambda2};
  h.ok = h.lambda1.value >= 0.0 && h.lambda_sum.value >= 0.0;
  return h;
}

namespace {

std::vector<Margin> leslie_basics(const ViscositySample& s) {
  const auto& a = s.alpha;
  return {{"alpha3-alpha2 >= 0", a[3] - a[2]},
          {"alpha4 >= 0", a[4]},
          {"2alpha4+alpha5+alpha6 >= 0", 2 * a[4] + a[5] + a[6]}};
}

void record_disagreements(FormCheck& f) {
  for (const auto& v : f.variants)
    if (v.holds() != f.ok)
      f.disagreements.push_back(v.name + (v.holds() ? " holds" : " fails") + " while the dissipation form is " +
                                (f.ok ? "semidefinite" : "indefinite"));
}

}  // namespace

FormCheck check_incompressible(const ViscositySample& s) {
  const auto& a = s.alpha;
  FormCheck f;
  const auto sd = semidefinite_check(dissipation_matrix(s, s.dim, false));
  f.ok = sd.ok;
  f.lambda_min = sd.lambda_min;

  const double printed_coupling = a[2] + a[3] + a[5] - a[6];
  const double coupling = a[2] + a[3] + a[6] - a[5];
  const double wide = 2 * a[4] + 2 * a[5] + 2 * a[6] + 3 * a[4];
  const double narrow = 2 * a[4] + a[5] + a[6];
  auto base = leslie_basics(s);
  base.push_back({"2alpha1+2alpha5+2alpha6+3alpha4 >= 0", 2 * a[1] + 2 * a[5] + 2 * a[6] + 3 * a[4]});

  InequalityList printed{"printed", base};
  printed.margins.push_back({"4(alpha2-alpha3)(2alpha4+2alpha5+2alpha6+3alpha4)-(alpha2+alpha3+alpha5-alpha6)^2 >= 0",
                             4 * (a[2] - a[3]) * wide - printed_coupling * printed_coupling});
  InequalityList flipped{"printed-sign-flipped", base};
  flipped.margins.push_back({"4(alpha3-alpha2)(2alpha4+2alpha5+2alpha6+3alpha4)-(alpha2+alpha3+alpha5-alpha6)^2 >= 0",
                             4 * (a[3] - a[2]) * wide - printed_coupling * printed_coupling});
  InequalityList gamma1{"gamma1", base};
  gamma1.margins.push_back({"4(alpha3-alpha2)(2alpha4+alpha5+alpha6)-(alpha2+alpha3+alpha5-alpha6)^2 >= 0",
                            4 * (a[3] - a[2]) * narrow - printed_coupling * printed_coupling});
  InequalityList consistent{"gamma1-consistent-coupling", base};
  consistent.margins.push_back({"4(alpha3-alpha2)(2alpha4+alpha5+alpha6)-(alpha2+alpha3+alpha6-alpha5)^2 >= 0",
                                4 * (a[3] - a[2]) * narrow - coupling * coupling});
  f.variants = {printed, flipped, gamma1, consistent};
  record_disagreements(f);
  return f;
}

FormCheck check_compressible(const ViscositySample& s, int d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 2");
  const auto& a = s.alpha;
  FormCheck f;
  const auto sd = semidefinite_check(dissipation_matrix(s, d, true));
  f.ok = sd.ok;
  f.lambda_min = sd.lambda_min;

  const double b = coupling_b(s);
  const double c = corner_c(s);
  const double brace = (d - 1) * (a[1] + a[5] + a[6]) + d * a[4];

  InequalityList theorem{"theorem", leslie_basics(s)};
  for (int N = 2; N <= d - 1; ++N)
    theorem.margins.push_back({"N(alpha1+alpha5+alpha6)+(N+1)alpha4 >= 0 [N=" + std::to_string(N) + "]",
                               N * (a[1] + a[5] + a[6]) + (N + 1) * a[4]});
  InequalityList theorem_corrected = theorem;
  theorem_corrected.name = "theorem-corrected-determinant";
  theorem.margins.push_back(
      {"alpha4(alpha0+alpha4+alpha7+alpha8){(d-1)(alpha1+alpha5+alpha6)+d alpha4}-(d-1)(alpha0+alpha1+alpha8)^2/4 >= 0",
       a[4] * c * brace - (d - 1) * b * b});
  theorem_corrected.margins.push_back(
      {"(alpha0+alpha4+alpha7+alpha8){(d-1)(alpha1+alpha5+alpha6)+d alpha4}-(d-1)(alpha0+alpha1+alpha8)^2/4 >= 0",
       c * brace - (d - 1) * b * b});

  InequalityList intro{"introduction", leslie_basics(s)};
  intro.margins.push_back({"2alpha1+2alpha5+2alpha6+3alpha4 >= 0", 2 * a[1] + 2 * a[5] + 2 * a[6] + 3 * a[4]});
  intro.margins.push_back(
      {"(alpha4+alpha7+alpha8)((d-1)alpha1+(d-1)alpha5+(d-1)alpha6+(2d-3)alpha4)-(alpha8+alpha1)^2/d >= 0",
       (a[4] + a[7] + a[8]) * ((d - 1) * (a[1] + a[5] + a[6]) + (2 * d - 3) * a[4]) -
           (a[8] + a[1]) * (a[8] + a[1]) / d});

  const Eigen::MatrixXd M = build_matrix_M(s, d);
  InequalityList sylvester{"matrix-M-leading-minors", {}};
  const auto minors = leading_minors(M);
  for (std::size_t k = 0; k < minors.size(); ++k)
    sylvester.margins.push_back({"det M_" + std::to_string(k + 1) + " >= 0", minors[k]});
  const auto msd = semidefinite_check(M);
  InequalityList m_eigen{"matrix-M-eigenvalues", leslie_basics(s)};
  m_eigen.margins.push_back({"lambda_min(M) >= -1e-10 |M|", msd.ok ? std::max(msd.lambda_min, 0.0) : msd.lambda_min});

  f.variants = {theorem, theorem_corrected, intro, sylvester, m_eigen};
  record_disagreements(f);
  return f;
}

// ---------------------------------------------------------------- sampling oracle

namespace {

template <int Dim>
struct Sampler {
  using V = Eigen::Matrix<double, Dim, 1>;
  using M = Eigen::Matrix<double, Dim, Dim>;
  using F = Eigen::Matrix<double, Dim, Dim - 1>;

  const ViscositySample& s;
  bool compressible;
  std::vector<M> basis;

  Sampler(const ViscositySample& sample, bool comp) : s(sample), compressible(comp) {
    for (const auto& b : symmetric_basis(Dim, !comp)) basis.push_back(b);
  }

  int coords() const { return Dim - 1 + static_cast<int>(basis.size()); }

  double value(const V& n, const V& N, const M& D) const {
    return pointwise::mechanical_dissipation<V, M>(s.alpha, n, N, D, compressible);
  }

  struct Best {
    double joint = std::numeric_limits<double>::infinity();
    double strain = std::numeric_limits<double>::infinity();
    double transport = std::numeric_limits<double>::infinity();
    V n;
    Eigen::VectorXd x;
  };

  Best run_block(std::uint64_t seed, std::uint64_t block, int count) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Best best;
    const int m = coords();
    Eigen::VectorXd x(m);
    F T;
    for (int t = 0; t < count; ++t) {
      V n;
      for (int i = 0; i < Dim; ++i) n(i) = gauss(rng);
      n.normalize();
      complement_frame(n, T);
      for (int i = 0; i < m; ++i) x(i) = gauss(rng);
      x.normalize();
      V N = T * x.head(Dim - 1);
      M D = M::Zero();
      for (std::size_t k = 0; k < basis.size(); ++k) D += x(Dim - 1 + static_cast<int>(k)) * basis[k];
      const double q = value(n, N, D);
      if (q < best.joint) {
        best.joint = q;
        best.n = n;
        best.x = x;
      }
      const double dn = D.norm();
      if (dn > 0.0) best.strain = std::min(best.strain, value(n, V::Zero(), D / dn));
      const double nn = N.norm();
      if (nn > 0.0) best.transport = std::min(best.transport, value(n, N / nn, M::Zero()));
    }
    return best;
  }

  /// Rayleigh-Ritz descent on span{x, gradient, previous step}, using only form evaluations.
  double refine(const V& n, Eigen::VectorXd& x) const {
    const int m = coords();
    F T;
    complement_frame(n, T);
    auto f = [&](const Eigen::VectorXd& y) {
      V N = T * y.head(Dim - 1);
      M D = M::Zero();
      for (std::size_t k = 0; k < basis.size(); ++k) D += y(Dim - 1 + static_cast<int>(k)) * basis[k];
      return value(n, N, D);
    };
    auto bilinear = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return 0.25 * (f(a + b) - f(a - b)); };
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(m);
    double fx = f(x);
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd grad(m);
      for (int i = 0; i < m; ++i) grad(i) = 2.0 * bilinear(x, Eigen::VectorXd::Unit(m, i));
      Eigen::VectorXd r = grad - 2.0 * fx * x;  // tangential part of the Rayleigh gradient
      if (r.norm() < 1e-15 * (1.0 + grad.norm())) break;
      std::vector<Eigen::VectorXd> span{x};
      for (Eigen::VectorXd cand : {r, prev}) {
        for (const auto& b : span) cand -= b.dot(cand) * b;
        for (const auto& b : span) cand -= b.dot(cand) * b;
        const double nc = cand.norm();
        if (nc > 1e-12) span.push_back(cand / nc);
      }
      const int k = static_cast<int>(span.size());
      Eigen::MatrixXd A(k, k);
      for (int i = 0; i < k; ++i) {
        A(i, i) = f(span[i]);
        for (int j = 0; j < i; ++j) A(i, j) = A(j, i) = bilinear(span[i], span[j]);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      const Eigen::VectorXd w = es.eigenvectors().col(0);
      Eigen::VectorXd next = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < k; ++i) next += w(i) * span[i];
      next.normalize();
      const double fn = f(next);
      prev = next - x.dot(next) * x;
      const double change = fx - fn;
      if (fn < fx) {
        x = next;
        fx = fn;
      }
      if (change <= 1e-16 * (1.0 + std::abs(fx))) break;
    }
    return fx;
  }

  OracleResult run(int trials, std::uint64_t seed) const {
    constexpr int kBlock = 256;
    const int blocks = (trials + kBlock - 1) / kBlock;
    std::vector<Best> results(blocks);
    parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b0, std::size_t b1) {
      for (std::size_t b = b0; b < b1; ++b) {
        const int count = std::min(kBlock, trials - static_cast<int>(b) * kBlock);
        results[b] = run_block(seed, b, count);
      }
    });
    Best best;
    for (const auto& r : results) {
      if (r.joint < best.joint) {
        best.joint = r.joint;
        best.n = r.n;
        best.x = r.x;
      }
      best.strain = std::min(best.strain, r.strain);
      best.transport = std::min(best.transport, r.transport);
    }
    OracleResult out;
    out.sampled_min = best.joint;
    out.strain_sector_min = best.strain;
    out.transport_sector_min = best.transport;
    Eigen::VectorXd x = best.x;
    const double refined = refine(best.n, x);
    out.min_value = std::min(refined, best.joint);

    F T;
    complement_frame(best.n, T);
    V N = T * x.head(Dim - 1);
    M D = M::Zero();
    for (std::size_t k = 0; k < basis.size(); ++k) D += x(Dim - 1 + static_cast<int>(k)) * basis[k];
    out.n = best.n;
    out.N = N;
    out.D = D;
    std::ostringstream os;
    os << "n=[" << best.n.transpose() << "] |N|^2=" << N.squaredNorm() << " |D|^2=" << D.squaredNorm()
       << " trD=" << D.trace();
    out.argmin = os.str();
    return out;
  }
};

template <int Dim>
OracleResult run_oracle(const ViscositySample& s, bool compressible, int trials, std::uint64_t seed) {
  return Sampler<Dim>(s, compressible).run(trials, seed);
}

}  // namespace

OracleResult dissipation_quadratic_min(const ViscositySample& s, int d, bool compressible, int trials,
                                       std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "oracle needs at least one trial");
  switch (d) {
    case 2: return run_oracle<2>(s, compressible, trials, seed);
    case 3: return run_oracle<3>(s, compressible, trials, seed);
    case 4: return run_oracle<4>(s, compressible, trials, seed);
    case 5: return run_oracle<5>(s, compressible, trials, seed);
    case 6: return run_oracle<6>(s, compressible, trials, seed);
    default: throw Error(ErrorCode::InvalidArgument, "oracle supports 2 <= d <= 6");
  }
}

AdmissibilityReport check_admissibility(const ViscositySample& s, int d, int oracle_trials, std::uint64_t seed) {
  AdmissibilityReport r;
  r.dim = d;
  ViscositySample sd = s;
  sd.dim = d;
  r.heat = check_heat(s);
  r.heat_ok = r.heat.ok;
  r.incompressible = check_incompressible(sd);
  r.incompressible_ok = r.incompressible.ok;
  r.compressible = check_compressible(s, d);
  r.compressible_ok = r.compressible.ok;
  if (oracle_trials > 0) {
    r.oracle_min_incompressible = dissipation_quadratic_min(s, d, false, oracle_trials, seed).min_value;
    r.oracle_min_compressible = dissipation_quadratic_min(s, d, true, oracle_trials, seed).min_value;
  }
  for (const auto& m : r.incompressible.disagreements) r.variant_disagreements.push_back("incompressible: " + m);
  for (const auto& m : r.compressible.disagreements) r.variant_disagreements.push_back("compressible: " + m);
  return r;
}

}  // namespace nematic
