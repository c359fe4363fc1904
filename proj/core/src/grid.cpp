#include "nematic/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "nematic/error.hpp"

namespace nematic {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridPtr Grid::make(int dim, std::vector<int> resolution, std::vector<double> period) {
  return GridPtr(new Grid(dim, std::move(resolution), std::move(period)));
}

Grid::Grid(int dim, std::vector<int> resolution, std::vector<double> period) : dim_(dim) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidArgument, "grid dimension must be 2 or 3");
  if (static_cast<int>(resolution.size()) != dim)
    throw Error(ErrorCode::InvalidArgument, "resolution list length must equal the dimension");
  if (period.empty()) period.assign(dim, 2.0 * std::numbers::pi);
  if (static_cast<int>(period.size()) != dim)
    throw Error(ErrorCode::InvalidArgument, "period list length must equal the dimension");

  size_ = 1;
  volume_ = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (resolution[a] < 8 || !power_of_two(resolution[a]))
      throw Error(ErrorCode::InvalidArgument,
                  "resolution " + std::to_string(resolution[a]) + " is not a power of two >= 8");
    if (!(period[a] > 0.0) || !std::isfinite(period[a]))
      throw Error(ErrorCode::InvalidArgument, "period must be positive and finite");
    n_[a] = resolution[a];
    period_[a] = period[a];
    size_ *= static_cast<std::size_t>(n_[a]);
    volume_ *= period[a];
  }
  const int last = dim - 1;
  const int half = n_[last] / 2 + 1;
  spectral_size_ = size_ / static_cast<std::size_t>(n_[last]) * static_cast<std::size_t>(half);

  modes_.resize(spectral_size_);
  xi_.resize(spectral_size_);
  dxi_.resize(spectral_size_);
  xi_norm_.resize(spectral_size_);
  dxi_norm2_.resize(spectral_size_);
  keep_.resize(spectral_size_);
  weight_.resize(spectral_size_);

  std::array<int, 3> ext{1, 1, 1};
  for (int a = 0; a < dim; ++a) ext[a] = n_[a];
  ext[last] = half;
  for (std::size_t k = 0; k < spectral_size_; ++k) {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rem = k;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % static_cast<std::size_t>(ext[a]));
      rem /= static_cast<std::size_t>(ext[a]);
    }
    std::array<int, 3> m{0, 0, 0};
    Point xi{0.0, 0.0, 0.0};
    Point dxi{0.0, 0.0, 0.0};
    bool keep = true;
    double nrm2 = 0.0;
    double dnrm2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const int n = n_[a];
      m[a] = (a == last || idx[a] <= n / 2) ? idx[a] : idx[a] - n;
      xi[a] = 2.0 * std::numbers::pi * m[a] / period_[a];
      dxi[a] = (std::abs(m[a]) == n / 2) ? 0.0 : xi[a];
      if (3 * std::abs(m[a]) >= n) keep = false;
      nrm2 += xi[a] * xi[a];
      dnrm2 += dxi[a] * dxi[a];
    }
    modes_[k] = m;
    xi_[k] = xi;
    dxi_[k] = dxi;
    xi_norm_[k] = std::sqrt(nrm2);
    dxi_norm2_[k] = dnrm2;
    keep_[k] = keep ? 1 : 0;
    weight_[k] = (idx[last] == 0 || idx[last] == n_[last] / 2) ? 1.0 : 2.0;
  }

  std::vector<double> rbuf(size_);
  std::vector<Complex> cbuf(spectral_size_);
  auto* r = rbuf.data();
  auto* c = reinterpret_cast<fftw_complex*>(cbuf.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_forward_ = fftw_plan_dft_r2c(dim, n_.data(), r, c, flags);
  plan_inverse_ = fftw_plan_dft_c2r(dim, n_.data(), c, r, flags | FFTW_DESTROY_INPUT);
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  if (plan_inverse_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

Point Grid::position(std::size_t point) const {
  Point x{0.0, 0.0, 0.0};
  for (int a = dim_ - 1; a >= 0; --a) {
    const auto n = static_cast<std::size_t>(n_[a]);
    x[a] = static_cast<double>(point % n) * period_[a] / static_cast<double>(n);
    point /= n;
  }
  return x;
}

void Grid::forward(const double* in, Complex* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t k = 0; k < spectral_size_; ++k) out[k] *= scale;
}

void Grid::inverse(const Complex* in, double* out) const {
  std::vector<Complex> scratch(in, in + spectral_size_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

bool Grid::same_shape(const Grid& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (n_[a] != other.n_[a] || period_[a] != other.period_[a]) return false;
  return true;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b) throw Error(ErrorCode::GridMismatch, "field has no grid");
  if (a != b && !a->same_shape(*b)) throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

// ---------------------------------------------------------------- fields

ScalarField::ScalarField(GridPtr grid, double value) : grid_(std::move(grid)), values_(grid_->size(), value) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw Error(ErrorCode::InvalidArgument, "sample count does not match grid");
}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(const Point&)>& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) out[i] = f(grid->position(i));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

VectorField::VectorField(GridPtr grid) : grid_(std::move(grid)) {
  for (int i = 0; i < grid_->dim(); ++i) c_.emplace_back(grid_);
}

VectorField::VectorField(std::vector<ScalarField> components) : c_(std::move(components)) {
  if (c_.empty()) throw Error(ErrorCode::InvalidArgument, "vector field needs components");
  grid_ = c_.front().grid();
  if (static_cast<int>(c_.size()) != grid_->dim())
    throw Error(ErrorCode::InvalidArgument, "vector field needs one component per dimension");
  for (const auto& c : c_) require_same_grid(grid_, c.grid());
}

VectorField VectorField::from_function(GridPtr grid, const std::function<Point(const Point&)>& f) {
  VectorField out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) out.set(i, f(grid->position(i)));
  return out;
}

Point VectorField::at(std::size_t point) const {
  Point v{0.0, 0.0, 0.0};
  for (int i = 0; i < dim(); ++i) v[i] = c_[i][point];
  return v;
}

void VectorField::set(std::size_t point, const Point& v) {
  for (int i = 0; i < dim(); ++i) c_[i][point] = v[i];
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < dim(); ++i) c_[i] += o.c_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < dim(); ++i) c_[i] -= o.c_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

TensorField::TensorField(GridPtr grid) : grid_(std::move(grid)), dim_(grid_->dim()) {
  for (int i = 0; i < dim_ * dim_; ++i) c_.emplace_back(grid_);
}

std::array<Point, 3> TensorField::at(std::size_t point) const {
  std::array<Point, 3> m{};
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m[i][j] = c_[i * dim_ + j][point];
  return m;
}

void TensorField::set(std::size_t point, const std::array<Point, 3>& m) {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) c_[i * dim_ + j][point] = m[i][j];
}

TensorField& TensorField::operator+=(const TensorField& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------- transforms

bool all_finite(const ScalarField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

Spectrum forward(const ScalarField& f) {
  if (!all_finite(f)) throw Error(ErrorCode::NonFinite, "field contains non-finite values");
  Spectrum s{f.grid(), std::vector<Complex>(f.grid()->spectral_size())};
  f.grid()->forward(f.data(), s.coeffs.data());
  return s;
}

ScalarField inverse(const Spectrum& s) {
  ScalarField f(s.grid);
  s.grid->inverse(s.coeffs.data(), f.data());
  return f;
}

namespace {

ScalarField derivative_of(const Spectrum& s, int axis) {
  const Grid& g = *s.grid;
  Spectrum d{s.grid, std::vector<Complex>(g.spectral_size())};
  for (std::size_t k = 0; k < g.spectral_size(); ++k)
    d.coeffs[k] = Complex(0.0, g.derivative_symbol(k)[axis]) * s.coeffs[k];
  return inverse(d);
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const Spectrum s = forward(f);
  std::vector<ScalarField> c;
  for (int a = 0; a < f.grid()->dim(); ++a) c.push_back(derivative_of(s, a));
  return VectorField(std::move(c));
}

TensorField gradient(const VectorField& v) {
  TensorField t(v.grid());
  for (int i = 0; i < v.dim(); ++i) {
    const Spectrum s = forward(v[i]);
    for (int j = 0; j < v.dim(); ++j) t(i, j) = derivative_of(s, j);
  }
  return t;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = *v.grid();
  Spectrum acc{v.grid(), std::vector<Complex>(g.spectral_size())};
  for (int j = 0; j < v.dim(); ++j) {
    require_same_grid(v.grid(), v[j].grid());
    const Spectrum s = forward(v[j]);
    for (std::size_t k = 0; k < g.spectral_size(); ++k)
      acc.coeffs[k] += Complex(0.0, g.derivative_symbol(k)[j]) * s.coeffs[k];
  }
  return inverse(acc);
}

VectorField divergence(const TensorField& t) {
  const Grid& g = *t.grid();
  std::vector<ScalarField> rows;
  for (int i = 0; i < t.dim(); ++i) {
    Spectrum acc{t.grid(), std::vector<Complex>(g.spectral_size())};
    for (int j = 0; j < t.dim(); ++j) {
      require_same_grid(t.grid(), t(i, j).grid());
      const Spectrum s = forward(t(i, j));
      for (std::size_t k = 0; k < g.spectral_size(); ++k)
        acc.coeffs[k] += Complex(0.0, g.derivative_symbol(k)[j]) * s.coeffs[k];
    }
    rows.push_back(inverse(acc));
  }
  return VectorField(std::move(rows));
}

ScalarField laplacian(const ScalarField& f) {
  Spectrum s = forward(f);
  const Grid& g = *f.grid();
  for (std::size_t k = 0; k < g.spectral_size(); ++k) s.coeffs[k] *= -g.derivative_norm2(k);
  return inverse(s);
}

VectorField laplacian(const VectorField& v) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(laplacian(v[i]));
  return VectorField(std::move(c));
}

VectorField leray_project(const VectorField& v) {
  const Grid& g = *v.grid();
  const int d = v.dim();
  std::vector<Spectrum> s;
  for (int i = 0; i < d; ++i) s.push_back(forward(v[i]));
  for (std::size_t k = 0; k < g.spectral_size(); ++k) {
    const double k2 = g.derivative_norm2(k);
    if (k2 == 0.0) continue;
    const Point& xi = g.derivative_symbol(k);
    Complex dot = 0.0;
    for (int i = 0; i < d; ++i) dot += xi[i] * s[i].coeffs[k];
    for (int i = 0; i < d; ++i) s[i].coeffs[k] -= xi[i] * dot / k2;
  }
  std::vector<ScalarField> c;
  for (int i = 0; i < d; ++i) c.push_back(inverse(s[i]));
  return VectorField(std::move(c));
}

std::size_t Grid::spectral_index(const std::array<int, 3>& mode) const {
  const int last = dim_ - 1;
  std::size_t k = 0;
  for (int a = 0; a < dim_; ++a) {
    const int n = n_[a];
    if (std::abs(mode[a]) > n / 2 || (a == last && mode[a] < 0))
      throw Error(ErrorCode::InvalidArgument, "mode outside the spectral layout");
    const int ext = a == last ? n / 2 + 1 : n;
    k = k * static_cast<std::size_t>(ext) + static_cast<std::size_t>(mode[a] < 0 ? mode[a] + n : mode[a]);
  }
  return k;
}

ScalarField resample(const ScalarField& f, const GridPtr& target) {
  const Grid& src = *f.grid();
  const Grid& dst = *target;
  if (src.dim() != dst.dim()) throw Error(ErrorCode::GridMismatch, "resampling across dimensions");
  for (int a = 0; a < src.dim(); ++a)
    if (std::abs(src.period(a) - dst.period(a)) > 1e-12 * src.period(a))
      throw Error(ErrorCode::GridMismatch, "resampling across periods");
  const Spectrum s = forward(f);
  Spectrum out{target, std::vector<Complex>(dst.spectral_size())};
  for (std::size_t k = 0; k < dst.spectral_size(); ++k) {
    const auto& m = dst.mode(k);
    bool inside = true;
    for (int a = 0; a < dst.dim(); ++a) {
      const int lim = std::min(src.resolution(a), dst.resolution(a)) / 2;
      inside = inside && std::abs(m[a]) < lim;
    }
    if (inside) out.coeffs[k] = s.coeffs[src.spectral_index(m)];
  }
  return inverse(out);
}

VectorField resample(const VectorField& v, const GridPtr& target) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(resample(v[i], target));
  return VectorField(std::move(c));
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = forward(f);
  const Grid& g = *f.grid();
  for (std::size_t k = 0; k < g.spectral_size(); ++k)
    if (!g.dealias_keep(k)) s.coeffs[k] = 0.0;
  return inverse(s);
}

VectorField dealias(const VectorField& v) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(dealias(v[i]));
  return VectorField(std::move(c));
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  const ScalarField at = dealias(a);
  const ScalarField bt = dealias(b);
  ScalarField p(a.grid());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = at[i] * bt[i];
  return dealias(p);
}

double mean(const ScalarField& f) {
  // Pairwise summation keeps the zero-mode read accurate and order-independent of threads.
  const auto& v = f.values();
  std::vector<double> buf(v.begin(), v.end());
  std::size_t n = buf.size();
  while (n > 1) {
    const std::size_t h = n / 2;
    for (std::size_t i = 0; i < h; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
    if (n % 2 == 1) buf[h] = buf[n - 1];
    n = h + n % 2;
  }
  return buf.empty() ? 0.0 : buf[0] / static_cast<double>(v.size());
}

double integral(const ScalarField& f) { return mean(f) * f.grid()->volume(); }

double l2_norm(const ScalarField& f) {
  ScalarField sq(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(integral(sq));
}

double l2_norm(const VectorField& v) {
  ScalarField sq(v.grid());
  for (int c = 0; c < v.dim(); ++c)
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += v[c][i] * v[c][i];
  return std::sqrt(integral(sq));
}

double spectral_l2_norm(const Spectrum& s) {
  const Grid& g = *s.grid;
  double acc = 0.0;
  for (std::size_t k = 0; k < g.spectral_size(); ++k) acc += g.multiplicity(k) * std::norm(s.coeffs[k]);
  return std::sqrt(acc * g.volume());
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField& v) {
  double m = 0.0;
  for (int i = 0; i < v.dim(); ++i) m = std::max(m, max_abs(v[i]));
  return m;
}

}  // namespace nematic
