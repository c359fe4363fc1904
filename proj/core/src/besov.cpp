#include "nematic/besov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "nematic/error.hpp"

namespace nematic {

namespace {

constexpr std::array<double, 8> kGaussNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

/// Shell of every spectral index (INT_MIN for the zero mode).
std::vector<int> shell_map(const Grid& g) {
  std::vector<int> q(g.spectral_size());
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    const double r = g.wavevector_norm(k);
    q[k] = r > 0.0 ? shell_index(r) : std::numeric_limits<int>::min();
  }
  return q;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

EstimateFit fit_of(std::vector<double> ratios) {
  EstimateFit fit;
  fit.max_ratio = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  fit.median_ratio = median_of(ratios);
  fit.ratios = std::move(ratios);
  return fit;
}

/// Shell norms from per-mode squared amplitudes.
std::vector<double> shell_norms_from(const Grid& g, const std::vector<int>& qmap, const ShellRange& r,
                                     const std::vector<double>& energy) {
  std::vector<double> acc(std::max(r.count(), 0), 0.0);
  for (std::size_t k = 0; k < g.spectral_size(); ++k)
    if (qmap[k] >= r.q_min) acc[qmap[k] - r.q_min] += g.multiplicity(k) * energy[k];
  for (double& a : acc) a = std::sqrt(a * g.volume());
  return acc;
}

double besov_from(const ShellRange& r, const std::vector<double>& norms, double s) {
  double acc = 0.0;
  for (int i = 0; i < r.count(); ++i) acc += std::exp2((r.q_min + i) * s) * norms[i];
  return acc;
}

}  // namespace

int shell_index(double xi_norm) {
  if (!(xi_norm > 0.0) || !std::isfinite(xi_norm))
    throw Error(ErrorCode::InvalidArgument, "shell index needs a positive finite wavevector norm");
  int e = 0;
  std::frexp(xi_norm, &e);  // xi = m 2^e with m in [1/2, 1)
  return e;
}

ShellRange shell_range(const Grid& grid) {
  ShellRange r{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  for (std::size_t k = 0; k < grid.spectral_size(); ++k) {
    const double x = grid.wavevector_norm(k);
    if (x <= 0.0) continue;
    const int q = shell_index(x);
    r.q_min = std::min(r.q_min, q);
    r.q_max = std::max(r.q_max, q);
  }
  return r;
}

double ShellProfile::norm(int q) const {
  if (q < range.q_min || q > range.q_max) return 0.0;
  return norms[q - range.q_min];
}

double ShellProfile::besov(double s) const { return besov_from(range, norms, s); }

ShellProfile shell_profile(const std::vector<const Spectrum*>& components, int derivative_power) {
  if (components.empty()) throw Error(ErrorCode::InvalidArgument, "shell profile of zero components");
  const GridPtr& gp = components.front()->grid;
  for (const Spectrum* c : components) require_same_grid(gp, c->grid);
  const Grid& g = *gp;
  ShellProfile out;
  out.range = shell_range(g);
  std::vector<double> energy(g.spectral_size(), 0.0);
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    const double w = derivative_power == 0 ? 1.0 : std::pow(g.derivative_norm2(k), derivative_power);
    for (const Spectrum* c : components) energy[k] += w * std::norm(c->coeffs[k]);
  }
  out.norms = shell_norms_from(g, shell_map(g), out.range, energy);
  return out;
}

ShellProfile shell_profile(const ScalarField& f, int derivative_power) {
  const Spectrum s = forward(f);
  return shell_profile({&s}, derivative_power);
}

ShellProfile shell_profile(const VectorField& v, int derivative_power) {
  std::vector<Spectrum> s;
  for (int i = 0; i < v.dim(); ++i) s.push_back(forward(v[i]));
  std::vector<const Spectrum*> ptr;
  for (const auto& x : s) ptr.push_back(&x);
  return shell_profile(ptr, derivative_power);
}

double intersection_norm(const ShellProfile& f, const ShellProfile& grad_f, double s_low, double s_high) {
  if (std::abs(s_high - s_low - 1.0) < 1e-12) return f.besov(s_low) + grad_f.besov(s_low);
  return f.besov(s_low) + f.besov(s_high);
}

DyadicDecomposition::DyadicDecomposition(ScalarField source, ShellRange range, std::vector<ScalarField> blocks)
    : source_(std::move(source)), range_(range), blocks_(std::move(blocks)) {}

ScalarField DyadicDecomposition::shell(int q) const {
  if (q < range_.q_min || q > range_.q_max) return ScalarField(source_.grid());
  return blocks_[q - range_.q_min];
}

ScalarField DyadicDecomposition::reconstruct() const {
  ScalarField out(source_.grid());
  for (const auto& b : blocks_) out += b;
  return out;
}

DyadicDecomposition dyadic_decompose(const ScalarField& f) {
  const Grid& g = *f.grid();
  const Spectrum s = forward(f);
  const ShellRange r = shell_range(g);
  const std::vector<int> qmap = shell_map(g);
  std::vector<ScalarField> blocks;
  for (int q = r.q_min; q <= r.q_max; ++q) {
    Spectrum b{f.grid(), std::vector<Complex>(g.spectral_size())};
    for (std::size_t k = 0; k < g.spectral_size(); ++k)
      if (qmap[k] == q) b.coeffs[k] = s.coeffs[k];
    blocks.push_back(inverse(b));
  }
  return DyadicDecomposition(f, r, std::move(blocks));
}

double besov_norm(const ScalarField& f, double s) { return shell_profile(f).besov(s); }
double besov_norm(const VectorField& v, double s) { return shell_profile(v).besov(s); }

BonyDecomposition bony_decompose(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  const Grid& g = *a.grid();
  const Spectrum sa = forward(dealias(a));
  const Spectrum sb = forward(dealias(b));
  const ShellRange r = shell_range(g);
  const std::vector<int> qmap = shell_map(g);
  // Index 0 holds the zero mode, index i >= 1 holds shell q_min + i - 1.
  const int count = r.count() + 1;
  auto blocks_of = [&](const Spectrum& s) {
    std::vector<ScalarField> out;
    for (int i = 0; i < count; ++i) {
      Spectrum part{s.grid, std::vector<Complex>(g.spectral_size())};
      for (std::size_t k = 0; k < g.spectral_size(); ++k) {
        const int idx = qmap[k] == std::numeric_limits<int>::min() ? 0 : qmap[k] - r.q_min + 1;
        if (idx == i) part.coeffs[k] = s.coeffs[k];
      }
      out.push_back(inverse(part));
    }
    return out;
  };
  const auto A = blocks_of(sa);
  const auto B = blocks_of(sb);
  BonyDecomposition out{ScalarField(a.grid()), ScalarField(a.grid()), ScalarField(a.grid())};
  ScalarField low_a(a.grid()), low_b(a.grid());  // S_{i-1}: blocks with index <= i - 2
  for (int i = 0; i < count; ++i) {
    if (i >= 2) {
      low_a += A[i - 2];
      low_b += B[i - 2];
    }
    out.paraproduct_ab += dealiased_product(low_a, B[i]);
    out.paraproduct_ba += dealiased_product(low_b, A[i]);
    for (int j = std::max(0, i - 1); j <= std::min(count - 1, i + 1); ++j) out.remainder += dealiased_product(A[i], B[j]);
  }
  return out;
}

ScalarField random_band_limited(const GridPtr& grid, std::uint64_t seed, double decay, const std::vector<int>& band) {
  const Grid& g = *grid;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss;
  Spectrum s{grid, std::vector<Complex>(g.spectral_size())};
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    bool inside = g.wavevector_norm(k) > 0.0;
    for (int a = 0; a < g.dim() && inside; ++a) inside = std::abs(g.mode(k)[a]) <= band[a];
    const double re = gauss(rng);
    const double im = gauss(rng);
    if (inside) s.coeffs[k] = Complex(re, im) * std::pow(1.0 + g.wavevector_norm(k), -decay);
  }
  ScalarField f = inverse(s);
  const double m = mean(f);
  for (double& v : f.values()) v -= m;
  return f;
}

bool EstimateFit::stable() const {
  if (!std::isfinite(max_ratio) || !std::isfinite(median_ratio)) return false;
  if (max_ratio == 0.0) return true;
  return max_ratio < 10.0 * median_ratio;
}

EstimateFit verify_product_estimate(const GridPtr& grid, double s1, double s2, int trials, std::uint64_t seed) {
  const Grid& g = *grid;
  const double d = g.dim();
  std::vector<int> band(g.dim());
  for (int a = 0; a < g.dim(); ++a) band[a] = g.resolution(a) / 4 - 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> decay(1.0, 3.0);
  std::vector<double> ratios;
  for (int t = 0; t < trials; ++t) {
    const double du = decay(rng);
    const double dv = decay(rng);
    const std::uint64_t su = rng();
    const std::uint64_t sv = rng();
    const ScalarField u = random_band_limited(grid, su, du, band);
    const ScalarField v = random_band_limited(grid, sv, dv, band);
    ScalarField uv(grid);
    for (std::size_t i = 0; i < uv.size(); ++i) uv[i] = u[i] * v[i];
    const double den = besov_norm(u, s1) * besov_norm(v, s2);
    ratios.push_back(den > 0.0 ? besov_norm(uv, s1 + s2 - d / 2.0) / den : 0.0);
  }
  return fit_of(std::move(ratios));
}

EstimateFit verify_embedding(const GridPtr& grid, int trials, std::uint64_t seed) {
  std::vector<int> band(grid->dim());
  for (int a = 0; a < grid->dim(); ++a) band[a] = grid->resolution(a) / 2 - 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> decay(1.0, 3.0);
  std::vector<double> ratios;
  for (int t = 0; t < trials; ++t) {
    const double dk = decay(rng);
    const ScalarField f = random_band_limited(grid, rng(), dk, band);
    const double den = besov_norm(f, grid->dim() / 2.0);
    ratios.push_back(den > 0.0 ? max_abs(f) / den : 0.0);
  }
  return fit_of(std::move(ratios));
}

EstimateFit verify_composition(const GridPtr& grid, const std::function<double(double)>& F, double s,
                               double amplitude, int trials, std::uint64_t seed) {
  std::vector<int> band(grid->dim());
  for (int a = 0; a < grid->dim(); ++a) band[a] = grid->resolution(a) / 4 - 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> decay(1.5, 3.0);
  std::vector<double> ratios;
  for (int t = 0; t < trials; ++t) {
    const double dk = decay(rng);
    ScalarField f = random_band_limited(grid, rng(), dk, band);
    const double m = max_abs(f);
    if (m > 0.0) f *= amplitude / m;
    ScalarField Ff(grid);
    for (std::size_t i = 0; i < f.size(); ++i) Ff[i] = F(f[i]);
    const double den = besov_norm(f, s);
    ratios.push_back(den > 0.0 ? besov_norm(Ff, s) / den : 0.0);
  }
  return fit_of(std::move(ratios));
}

double ParabolicSymbol::operator()(const Point& xi) const {
  const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  const double nx = n[0] * xi[0] + n[1] * xi[1] + n[2] * xi[2];
  return lambda1 * r2 + lambda2 * nx * nx;
}

double ParabolicSymbol::lambda0() const { return lambda1 + std::min(lambda2, 0.0); }

double SmoothingNorms::l1_ratio(double lambda0) const {
  const double rhs = phi0 + int_f;
  const double lhs = sup_phi + int_dt_phi + lambda0 * int_lap_phi;
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

double SmoothingNorms::l2_ratio() const {
  const double rhs = grad_phi0 + l2_f;
  const double lhs = l2_dt_phi + l2_lap_phi + sup_grad_phi;
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

SmoothingNorms smoothing_norms(const ScalarField& phi0, const ScalarField& f, const ParabolicSymbol& op, double s,
                               double horizon) {
  require_same_grid(phi0.grid(), f.grid());
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing horizon must be positive");
  const Grid& g = *phi0.grid();
  const Spectrum p0 = forward(phi0);
  const Spectrum fs = forward(f);
  const ShellRange r = shell_range(g);
  const std::vector<int> qmap = shell_map(g);
  const std::size_t M = g.spectral_size();

  std::vector<double> rate(M), lap(M);
  double rate_max = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    rate[k] = op(g.derivative_symbol(k));
    lap[k] = g.derivative_norm2(k);
    rate_max = std::max(rate_max, rate[k]);
  }

  std::vector<double> e_phi(M), e_dt(M), e_lap(M), e_grad(M);
  auto norms_at = [&](double t, double& phi, double& dt, double& lp, double& grad) {
    for (std::size_t k = 0; k < M; ++k) {
      const double a = rate[k];
      const double decay = std::exp(-a * t);
      const double growth = a > 0.0 ? -std::expm1(-a * t) / a : t;
      const Complex v = decay * p0.coeffs[k] + growth * fs.coeffs[k];
      const Complex dv = decay * (fs.coeffs[k] - a * p0.coeffs[k]);
      e_phi[k] = std::norm(v);
      e_dt[k] = std::norm(dv);
      e_lap[k] = lap[k] * lap[k] * std::norm(v);
      e_grad[k] = lap[k] * std::norm(v);
    }
    phi = besov_from(r, shell_norms_from(g, qmap, r, e_phi), s);
    dt = besov_from(r, shell_norms_from(g, qmap, r, e_dt), s);
    lp = besov_from(r, shell_norms_from(g, qmap, r, e_lap), s);
    grad = besov_from(r, shell_norms_from(g, qmap, r, e_grad), s);
  };

  SmoothingNorms out;
  double dt0 = 0.0, lap0 = 0.0;
  norms_at(0.0, out.phi0, dt0, lap0, out.grad_phi0);
  out.sup_phi = out.phi0;
  out.sup_grad_phi = out.grad_phi0;
  {
    std::vector<double> ef(M);
    for (std::size_t k = 0; k < M; ++k) ef[k] = std::norm(fs.coeffs[k]);
    const double fn = besov_from(r, shell_norms_from(g, qmap, r, ef), s);
    out.int_f = horizon * fn;
    out.l2_f = std::sqrt(horizon) * fn;
  }

  // Panels [0, T 2^-J], [T 2^-J, T 2^-J+1], ..., [T/2, T] resolve every decay rate.
  const int J = std::clamp(static_cast<int>(std::ceil(std::log2(std::max(rate_max * horizon, 1.0) * 1e3))), 4, 60);
  double sq_dt = 0.0, sq_lap = 0.0;
  for (int p = 0; p <= J; ++p) {
    const double lo = p == 0 ? 0.0 : horizon * std::exp2(p - 1 - J);
    const double hi = horizon * std::exp2(p - J);
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
      const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * kGaussNodes[i];
      const double w = 0.5 * (hi - lo) * kGaussWeights[i];
      double phi, dt, lp, grad;
      norms_at(t, phi, dt, lp, grad);
      out.sup_phi = std::max(out.sup_phi, phi);
      out.sup_grad_phi = std::max(out.sup_grad_phi, grad);
      out.int_dt_phi += w * dt;
      out.int_lap_phi += w * lp;
      sq_dt += w * dt * dt;
      sq_lap += w * lp * lp;
    }
  }
  double phi, dt, lp, grad;
  norms_at(horizon, phi, dt, lp, grad);
  out.sup_phi = std::max(out.sup_phi, phi);
  out.sup_grad_phi = std::max(out.sup_grad_phi, grad);
  out.l2_dt_phi = std::sqrt(sq_dt);
  out.l2_lap_phi = std::sqrt(sq_lap);
  return out;
}

SmoothingFit verify_smoothing_estimate(const GridPtr& grid, double s, const ParabolicSymbol& op, double horizon,
                                       int trials, std::uint64_t seed) {
  const Grid& g = *grid;
  std::vector<int> band(g.dim());
  for (int a = 0; a < g.dim(); ++a) band[a] = g.resolution(a) / 3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> decay(1.0, 3.0);
  std::uniform_real_distribution<double> log_amp(-1.0, 1.0);
  std::vector<double> l1, l2;
  for (int t = 0; t < trials; ++t) {
    const double dp = decay(rng);
    const double df = decay(rng);
    const double amp = std::pow(10.0, log_amp(rng));
    const std::uint64_t sp = rng();
    const std::uint64_t sf = rng();
    const ScalarField phi0 = random_band_limited(grid, sp, dp, band);
    ScalarField f = random_band_limited(grid, sf, df, band);
    f *= t % 2 ? amp : 0.0;
    const SmoothingNorms n = smoothing_norms(phi0, f, op, s, horizon);
    l1.push_back(n.l1_ratio(op.lambda0()));
    l2.push_back(n.l2_ratio());
  }
  return SmoothingFit{fit_of(std::move(l1)), fit_of(std::move(l2))};
}

namespace {

struct FrameSpectra {
  std::vector<Spectrum> u, omega, m;
};

FrameSpectra frame_spectra(const SimState& s, double theta_ref, const Point& n_ref) {
  FrameSpectra out;
  const int d = s.grid()->dim();
  for (int i = 0; i < d; ++i) out.u.push_back(forward(s.u[i]));
  ScalarField omega = s.theta;
  for (double& v : omega.values()) v -= theta_ref;
  out.omega.push_back(forward(omega));
  for (int i = 0; i < d; ++i) {
    ScalarField mi = s.n[i];
    for (double& v : mi.values()) v -= n_ref[i];
    out.m.push_back(forward(mi));
  }
  return out;
}

std::vector<Spectrum> combine(const std::vector<const std::vector<Spectrum>*>& parts, const std::vector<double>& w) {
  std::vector<Spectrum> out = *parts[0];
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (auto& x : out[c].coeffs) x *= w[0];
    for (std::size_t p = 1; p < parts.size(); ++p)
      for (std::size_t k = 0; k < out[c].coeffs.size(); ++k) out[c].coeffs[k] += w[p] * (*parts[p])[c].coeffs[k];
  }
  return out;
}

std::vector<const Spectrum*> ptrs(const std::vector<Spectrum>& v) {
  std::vector<const Spectrum*> out;
  for (const auto& s : v) out.push_back(&s);
  return out;
}

/// Intersection norm of a field given by its spectra, with an extra derivative power.
double inter(const std::vector<Spectrum>& c, int power, double s_low, double s_high) {
  const auto p = ptrs(c);
  return intersection_norm(shell_profile(p, power), shell_profile(p, power + 1), s_low, s_high);
}

struct Indices {
  double u_lo, u_hi, t_lo, t_hi, n_lo, n_hi;
};

Indices indices_for(int d) {
  const double h = d / 2.0;
  return {h - 1.0, h, h - 2.0, h, h, h + 1.0};
}

StateNorms norms_of(const FrameSpectra& f, int power, const Indices& ix) {
  return {inter(f.u, power, ix.u_lo, ix.u_hi), inter(f.omega, power, ix.t_lo, ix.t_hi),
          inter(f.m, power, ix.n_lo, ix.n_hi)};
}

}  // namespace

StateNorms state_norms(const VectorField& u, const ScalarField& omega, const VectorField& m) {
  FrameSpectra f;
  for (int i = 0; i < u.dim(); ++i) f.u.push_back(forward(u[i]));
  f.omega.push_back(forward(omega));
  for (int i = 0; i < m.dim(); ++i) f.m.push_back(forward(m[i]));
  return norms_of(f, 0, indices_for(omega.grid()->dim()));
}

XNormSeries x_norms(const std::vector<SimState>& trajectory, double theta_ref, const Point& n_ref,
                    double alpha4_ref) {
  const std::size_t K = trajectory.size();
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "X-norms need at least two stored states");
  for (std::size_t k = 1; k < K; ++k)
    if (!(trajectory[k].t > trajectory[k - 1].t))
      throw Error(ErrorCode::InvalidArgument, "trajectory times must increase strictly");
  const Indices ix = indices_for(trajectory.front().grid()->dim());

  std::map<std::size_t, FrameSpectra> cache;
  auto spectra = [&](std::size_t k) -> const FrameSpectra& {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, frame_spectra(trajectory[k], theta_ref, n_ref)).first;
    return it->second;
  };
  const auto time = [&](std::size_t k) { return trajectory[k].t; };

  // Three-point (two-point when K = 2) weights for the time derivative at frame k.
  auto derivative = [&](std::size_t k) {
    std::array<std::size_t, 3> idx{};
    std::vector<double> w;
    if (K == 2) {
      const double h = time(1) - time(0);
      idx = {0, 1, 1};
      w = {-1.0 / h, 1.0 / h};
    } else if (k == 0) {
      const double h1 = time(1) - time(0), h2 = time(2) - time(1);
      idx = {0, 1, 2};
      w = {-(2 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))};
    } else if (k == K - 1) {
      const double h1 = time(K - 2) - time(K - 3), h2 = time(K - 1) - time(K - 2);
      idx = {K - 3, K - 2, K - 1};
      w = {h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2 * h2 + h1) / (h2 * (h1 + h2))};
    } else {
      const double h1 = time(k) - time(k - 1), h2 = time(k + 1) - time(k);
      idx = {k - 1, k, k + 1};
      w = {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
    }
    FrameSpectra out;
    const FrameSpectra& a = spectra(idx[0]);
    const FrameSpectra& b = spectra(idx[1]);
    if (w.size() == 2) {
      out.u = combine({&a.u, &b.u}, w);
      out.omega = combine({&a.omega, &b.omega}, w);
      out.m = combine({&a.m, &b.m}, w);
    } else {
      const FrameSpectra& c = spectra(idx[2]);
      out.u = combine({&a.u, &b.u, &c.u}, w);
      out.omega = combine({&a.omega, &b.omega, &c.omega}, w);
      out.m = combine({&a.m, &b.m, &c.m}, w);
    }
    return out;
  };

  XNormSeries out;
  StateNorms sup{}, int_dt{}, int_lap{}, prev_dt{}, prev_lap{};
  for (std::size_t k = 0; k < K; ++k) {
    const StateNorms val = norms_of(spectra(k), 0, ix);
    const StateNorms dt = norms_of(derivative(k), 0, ix);
    const StateNorms lap = norms_of(spectra(k), 2, ix);
    sup = {std::max(sup.u, val.u), std::max(sup.theta, val.theta), std::max(sup.n, val.n)};
    if (k > 0) {
      const double h = 0.5 * (time(k) - time(k - 1));
      int_dt = {int_dt.u + h * (dt.u + prev_dt.u), int_dt.theta + h * (dt.theta + prev_dt.theta),
                int_dt.n + h * (dt.n + prev_dt.n)};
      int_lap = {int_lap.u + h * (lap.u + prev_lap.u), int_lap.theta + h * (lap.theta + prev_lap.theta),
                 int_lap.n + h * (lap.n + prev_lap.n)};
    }
    prev_dt = dt;
    prev_lap = lap;
    out.t.push_back(time(k));
    out.X1.push_back(sup.u + int_dt.u + alpha4_ref * int_lap.u);
    out.X2.push_back(sup.theta + int_dt.theta + int_lap.theta);
    out.X3.push_back(sup.n + int_dt.n + int_lap.n);
    while (!cache.empty() && cache.begin()->first + 2 < k) cache.erase(cache.begin());
  }
  return out;
}

}  // namespace nematic
