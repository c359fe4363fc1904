#pragma once

#include <functional>

#include <cstdint>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/state.hpp"

namespace nematic {

/// Shell of a wavevector magnitude: q with 2^(q-1) <= |xi| < 2^q.
int shell_index(double xi_norm);

struct ShellRange {
  int q_min = 0;
  int q_max = -1;
  int count() const { return q_max - q_min + 1; }
};

/// Shells occupied by the nonzero modes of the grid.
ShellRange shell_range(const Grid& grid);

/// Per-shell L2 norms of a (possibly vector-valued) field.
struct ShellProfile {
  ShellRange range;
  std::vector<double> norms;  // norms[q - q_min]

  double norm(int q) const;
  /// sum_q 2^(qs) |Delta_q f|_L2
  double besov(double s) const;
};

/// Profile of the components, each coefficient weighted by |xi|^derivative_power
/// (1 gives the gradient, 2 the Laplacian). The zero mode is ignored.
ShellProfile shell_profile(const std::vector<const Spectrum*>& components, int derivative_power = 0);
ShellProfile shell_profile(const ScalarField& f, int derivative_power = 0);
ShellProfile shell_profile(const VectorField& v, int derivative_power = 0);

/// Norm of the intersection of two homogeneous Besov spaces. When the indices
/// differ by one this is |f|_{s_low} + |grad f|_{s_low}; otherwise the sum of
/// the two norms.
double intersection_norm(const ShellProfile& f, const ShellProfile& grad_f, double s_low, double s_high);

/// Littlewood-Paley blocks with sharp shell indicators.
class DyadicDecomposition {
public:
  DyadicDecomposition(ScalarField source, ShellRange range, std::vector<ScalarField> blocks);

  const ScalarField& source() const { return source_; }
  int q_min() const { return range_.q_min; }
  int q_max() const { return range_.q_max; }
  /// Delta_q f; a zero field outside the range.
  ScalarField shell(int q) const;
  /// Sum of every block, i.e. the source minus its mean.
  ScalarField reconstruct() const;

private:
  ScalarField source_;
  ShellRange range_;
  std::vector<ScalarField> blocks_;
};

DyadicDecomposition dyadic_decompose(const ScalarField& f);

double besov_norm(const ScalarField& f, double s);
double besov_norm(const VectorField& v, double s);

/// ab = T_a b + T_b a + R(a, b) with every piece a dealiased product.
struct BonyDecomposition {
  ScalarField paraproduct_ab;  // sum_q S_{q-1} a Delta_q b
  ScalarField paraproduct_ba;  // sum_q S_{q-1} b Delta_q a
  ScalarField remainder;       // sum_{|q-q'| <= 1} Delta_q a Delta_q' b
};

/// The zero mode counts as a shell below every other one.
BonyDecomposition bony_decompose(const ScalarField& a, const ScalarField& b);

/// Random real field with Gaussian coefficients decaying like (1 + |xi|)^(-decay),
/// restricted to |k_a| <= band_a on each axis, zero mean.
ScalarField random_band_limited(const GridPtr& grid, std::uint64_t seed, double decay, const std::vector<int>& band);

struct EstimateFit {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  /// finite and max_ratio < 10 * median_ratio
  bool stable() const;
};

/// Ratio |uv|_{s1+s2-d/2} / (|u|_{s1} |v|_{s2}) over random pairs. Fields are
/// band-limited to a quarter of the grid so the pointwise product is exact.
EstimateFit verify_product_estimate(const GridPtr& grid, double s1, double s2, int trials, std::uint64_t seed);

/// Ratio |f|_Linf / |f|_{d/2} over random zero-mean fields.
EstimateFit verify_embedding(const GridPtr& grid, int trials, std::uint64_t seed);

/// Ratio |F(f)|_s / |f|_s for a smooth F with F(0) = 0, over random fields
/// scaled to max |f| = amplitude.
EstimateFit verify_composition(const GridPtr& grid, const std::function<double(double)>& F, double s,
                               double amplitude, int trials, std::uint64_t seed);

/// Constant-coefficient elliptic symbol lambda1 |xi|^2 + lambda2 (n . xi)^2.
struct ParabolicSymbol {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  Point n{1.0, 0.0, 0.0};

  double operator()(const Point& xi) const;
  /// Ellipticity constant: lambda1 + min(lambda2, 0).
  double lambda0() const;
};

/// Norms entering the parabolic smoothing estimates for one solution of
/// d_t phi - L phi = f with f constant in time.
struct SmoothingNorms {
  double sup_phi = 0.0;        // sup_t |phi|_s
  double int_dt_phi = 0.0;     // int |d_t phi|_s
  double int_lap_phi = 0.0;    // int |Delta phi|_s
  double phi0 = 0.0;           // |phi0|_s
  double int_f = 0.0;          // int |f|_s
  double l2_dt_phi = 0.0;      // (int |d_t phi|_s^2)^(1/2)
  double l2_lap_phi = 0.0;     // (int |Delta phi|_s^2)^(1/2)
  double sup_grad_phi = 0.0;   // sup_t |grad phi|_s
  double grad_phi0 = 0.0;      // |grad phi0|_s
  double l2_f = 0.0;           // (int |f|_s^2)^(1/2)

  /// (sup + int d_t + lambda0 int Delta) / (|phi0| + int |f|); 0 when both vanish.
  double l1_ratio(double lambda0) const;
  /// (|(d_t phi, Delta phi)|_{L2} + sup |grad phi|) / (|grad phi0| + |f|_{L2}).
  double l2_ratio() const;
};

/// Evaluates the norms from the exact per-mode solution, with Gauss-Legendre
/// quadrature on geometrically graded panels in time.
SmoothingNorms smoothing_norms(const ScalarField& phi0, const ScalarField& f, const ParabolicSymbol& op, double s,
                               double horizon);

struct SmoothingFit {
  EstimateFit l1;
  EstimateFit l2;
};

/// Random phi0 and f over `trials` runs; every other run has f = 0.
SmoothingFit verify_smoothing_estimate(const GridPtr& grid, double s, const ParabolicSymbol& op, double horizon,
                                       int trials, std::uint64_t seed);

/// Running values of the composite trajectory norms.
struct XNormSeries {
  std::vector<double> t;
  std::vector<double> X1, X2, X3;
};

/// X1 for u, X2 for theta - theta_ref, X3 for n - n_ref. Time derivatives use
/// three-point differences of the stored states, integrals the trapezoid rule.
XNormSeries x_norms(const std::vector<SimState>& trajectory, double theta_ref, const Point& n_ref,
                    double alpha4_ref);

/// Instantaneous intersection norms of a state perturbation, the quantities
/// under the sup in X1, X2, X3.
struct StateNorms {
  double u = 0.0;
  double theta = 0.0;
  double n = 0.0;
  double sum() const { return u + theta + n; }
};
StateNorms state_norms(const VectorField& u, const ScalarField& omega, const VectorField& m);

}  // namespace nematic
