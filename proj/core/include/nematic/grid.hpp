#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace nematic {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Periodic box with power-of-two resolution per axis.
///
/// Physical samples are stored row-major (axis 0 slowest). Spectral
/// coefficients use the real-to-complex half layout: every axis is full except
/// the last, which keeps indices 0..n/2. Coefficients are normalized so that
/// the zero mode equals the grid mean.
class Grid {
public:
  static GridPtr make(int dim, std::vector<int> resolution, std::vector<double> period = {});
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int dim() const { return dim_; }
  int resolution(int axis) const { return n_[axis]; }
  double period(int axis) const { return period_[axis]; }
  std::size_t size() const { return size_; }
  std::size_t spectral_size() const { return spectral_size_; }
  double volume() const { return volume_; }
  double cell_volume() const { return volume_ / static_cast<double>(size_); }

  Point position(std::size_t point) const;

  /// Signed integer wavenumbers of a spectral index (unused axes are 0).
  const std::array<int, 3>& mode(std::size_t k) const { return modes_[k]; }
  /// Physical wavevector 2*pi*k/L including Nyquist components.
  const Point& wavevector(std::size_t k) const { return xi_[k]; }
  /// Wavevector used for differentiation: Nyquist components are zeroed.
  const Point& derivative_symbol(std::size_t k) const { return dxi_[k]; }
  double wavevector_norm(std::size_t k) const { return xi_norm_[k]; }
  /// |derivative_symbol|^2, the Laplacian multiplier with sign flipped.
  double derivative_norm2(std::size_t k) const { return dxi_norm2_[k]; }
  /// Inside the 2/3-rule band: |k_a| < n_a/3 on every axis.
  bool dealias_keep(std::size_t k) const { return keep_[k] != 0; }
  /// Number of full-spectrum coefficients represented by a half-layout entry.
  double multiplicity(std::size_t k) const { return weight_[k]; }

  void forward(const double* in, Complex* out) const;
  void inverse(const Complex* in, double* out) const;

  bool same_shape(const Grid& other) const;
  /// Spectral index of a mode (last component >= 0, each |k_a| <= n_a / 2).
  std::size_t spectral_index(const std::array<int, 3>& mode) const;

private:
  Grid(int dim, std::vector<int> resolution, std::vector<double> period);

  int dim_;
  std::array<int, 3> n_{1, 1, 1};
  std::array<double, 3> period_{0.0, 0.0, 0.0};
  std::size_t size_ = 0;
  std::size_t spectral_size_ = 0;
  double volume_ = 0.0;
  std::vector<std::array<int, 3>> modes_;
  std::vector<Point> xi_;
  std::vector<Point> dxi_;
  std::vector<double> xi_norm_;
  std::vector<double> dxi_norm2_;
  std::vector<unsigned char> keep_;
  std::vector<double> weight_;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

void require_same_grid(const GridPtr& a, const GridPtr& b);

class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);
  static ScalarField from_function(GridPtr grid, const std::function<double(const Point&)>& f);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

private:
  GridPtr grid_;
  std::vector<double> values_;
};

class VectorField {
public:
  VectorField() = default;
  explicit VectorField(GridPtr grid);
  explicit VectorField(std::vector<ScalarField> components);
  static VectorField from_function(GridPtr grid, const std::function<Point(const Point&)>& f);

  const GridPtr& grid() const { return grid_; }
  int dim() const { return static_cast<int>(c_.size()); }
  ScalarField& operator[](int i) { return c_[i]; }
  const ScalarField& operator[](int i) const { return c_[i]; }
  /// Components at one grid point, zero-padded to three entries.
  Point at(std::size_t point) const;
  void set(std::size_t point, const Point& v);

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

private:
  GridPtr grid_;
  std::vector<ScalarField> c_;
};

/// Rank-2 field; component (i, j) is row i, column j.
class TensorField {
public:
  TensorField() = default;
  explicit TensorField(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  int dim() const { return dim_; }
  ScalarField& operator()(int i, int j) { return c_[i * dim_ + j]; }
  const ScalarField& operator()(int i, int j) const { return c_[i * dim_ + j]; }
  /// Components at one grid point, zero-padded to 3x3.
  std::array<Point, 3> at(std::size_t point) const;
  void set(std::size_t point, const std::array<Point, 3>& m);

  TensorField& operator+=(const TensorField& o);

private:
  GridPtr grid_;
  int dim_ = 0;
  std::vector<ScalarField> c_;
};

struct Spectrum {
  GridPtr grid;
  std::vector<Complex> coeffs;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

VectorField gradient(const ScalarField& f);
/// G(i, j) = d_j v_i.
TensorField gradient(const VectorField& v);
ScalarField divergence(const VectorField& v);
/// Row-wise: (div T)_i = d_j T(i, j).
VectorField divergence(const TensorField& t);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
VectorField leray_project(const VectorField& v);

/// Fourier interpolation onto another grid of the same dimension and period:
/// zero padding when refining, truncation when coarsening. Nyquist modes of
/// the source are dropped.
ScalarField resample(const ScalarField& f, const GridPtr& target);
VectorField resample(const VectorField& v, const GridPtr& target);

/// Zeroes every coefficient outside the 2/3-rule band.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);

/// Grid mean, i.e. the zero-mode coefficient.
double mean(const ScalarField& f);
double integral(const ScalarField& f);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
/// L2 norm evaluated from the spectral coefficients.
double spectral_l2_norm(const Spectrum& s);
double max_abs(const ScalarField& f);
double max_abs(const VectorField& v);
bool all_finite(const ScalarField& f);

}  // namespace nematic
