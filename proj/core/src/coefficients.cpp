#include "nematic/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "nematic/error.hpp"

namespace nematic {

double Polynomial::operator()(double offset) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * offset + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(static_cast<double>(i) * c_[i]);
  return Polynomial(std::move(d));
}

bool Polynomial::is_constant() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0.0) return false;
  return true;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Polynomial(std::move(c));
}

MaterialValues CoefficientSet::at(double theta) const {
  const double w = theta - theta_ref;
  MaterialValues m;
  for (int i = 0; i < 9; ++i) m.alpha[i] = alpha[i](w);
  m.lambda1 = lambda1(w);
  m.lambda2 = lambda2(w);
  for (int i = 0; i < 4; ++i) {
    const Polynomial d = K[i].derivative();
    m.K[i] = K[i](w);
    m.dK[i] = d(w);
    m.d2K[i] = d.derivative()(w);
  }
  m.gamma1 = m.alpha[3] - m.alpha[2];
  m.gamma2 = m.alpha[6] - m.alpha[5];
  return m;
}

bool CoefficientSet::frank_isothermal() const {
  for (const auto& k : K)
    if (!k.is_constant()) return false;
  return true;
}

void CoefficientSet::validate(int dim) const {
  if (!(theta_ref > 0.0) || !std::isfinite(theta_ref))
    throw Error(ErrorCode::Config, "theta_ref must be positive");
  double nn = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (i >= dim && n_ref[i] != 0.0) throw Error(ErrorCode::Config, "n_ref has more components than the dimension");
    nn += n_ref[i] * n_ref[i];
  }
  if (std::abs(nn - 1.0) > 1e-14) throw Error(ErrorCode::Config, "n_ref must be a unit vector");
}

CoefficientSet isotropic_coefficients(int dim, double alpha4, double K1, double lambda1, double gamma1) {
  CoefficientSet c;
  c.n_ref = {1.0, 0.0, 0.0};
  (void)dim;
  c.alpha[4] = Polynomial{alpha4};
  c.alpha[2] = Polynomial{-gamma1 / 2.0};
  c.alpha[3] = Polynomial{gamma1 / 2.0};
  c.K[0] = Polynomial{K1};
  c.lambda1 = Polynomial{lambda1};
  return c;
}

std::array<Polynomial, 4> frank_from_classical(const Polynomial& k11, const Polynomial& k22, const Polynomial& k24,
                                               const Polynomial& k33) {
  return {k22, k11 - k22 - k24, k33 - k22, k24};
}

namespace {

Polynomial read_poly(const kv::Document& doc, const kv::Section& s, const std::string& key) {
  const kv::Entry* e = s.find(key);
  if (e == nullptr) return Polynomial{};
  if (e->value.find('[') == std::string::npos) return Polynomial{kv::to_real(doc, *e)};
  auto c = kv::to_real_list(doc, *e);
  if (c.empty()) kv::fail(doc, *e, "polynomial needs at least one coefficient");
  return Polynomial(std::move(c));
}

void write_poly(std::ostream& os, const std::string& key, const Polynomial& p) {
  os << key << " = [";
  const auto& c = p.coefficients();
  if (c.empty()) os << "0";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
  os << "]\n";
}

}  // namespace

CoefficientSet coefficients_from_section(const kv::Document& doc, const kv::Section& s, int dim) {
  static const std::vector<std::string> known = {
      "theta_ref", "n_ref", "alpha0", "alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "alpha7",
      "alpha8", "lambda1", "lambda2", "K1", "K2", "K3", "K4", "k11", "k22", "k24", "k33"};
  for (const auto& e : s.entries)
    if (std::find(known.begin(), known.end(), e.key) == known.end()) kv::fail(doc, e, "unknown coefficient key");

  CoefficientSet c;
  if (const auto* e = s.find("theta_ref")) c.theta_ref = kv::to_real(doc, *e);
  if (!(c.theta_ref > 0.0)) kv::fail(doc, *s.find("theta_ref"), "theta_ref must be positive");
  if (const auto* e = s.find("n_ref")) {
    const auto v = kv::to_real_list(doc, *e);
    if (static_cast<int>(v.size()) != dim) kv::fail(doc, *e, "n_ref needs " + std::to_string(dim) + " components");
    double nn = 0.0;
    c.n_ref = {0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
      c.n_ref[i] = v[i];
      nn += v[i] * v[i];
    }
    if (std::abs(nn - 1.0) > 1e-14) kv::fail(doc, *e, "n_ref must have unit length");
  }
  for (int i = 0; i < 9; ++i) c.alpha[i] = read_poly(doc, s, "alpha" + std::to_string(i));
  c.lambda1 = read_poly(doc, s, "lambda1");
  c.lambda2 = read_poly(doc, s, "lambda2");

  const bool classical = s.find("k11") || s.find("k22") || s.find("k24") || s.find("k33");
  const bool frank = s.find("K1") || s.find("K2") || s.find("K3") || s.find("K4");
  if (classical && frank) {
    const kv::Entry* e = s.find("k11") ? s.find("k11") : s.find("k22") ? s.find("k22") : s.find("k24") ? s.find("k24") : s.find("k33");
    kv::fail(doc, *e, "give either K1..K4 or k11/k22/k24/k33, not both");
  }
  if (classical) {
    c.K = frank_from_classical(read_poly(doc, s, "k11"), read_poly(doc, s, "k22"), read_poly(doc, s, "k24"),
                               read_poly(doc, s, "k33"));
  } else {
    for (int i = 0; i < 4; ++i) c.K[i] = read_poly(doc, s, "K" + std::to_string(i + 1));
  }
  return c;
}

void write_coefficients(std::ostream& os, const CoefficientSet& c, int dim) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "[coefficients]\n";
  os << "theta_ref = " << c.theta_ref << "\n";
  os << "n_ref = [";
  for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << c.n_ref[i];
  os << "]\n";
  for (int i = 0; i < 9; ++i) write_poly(os, "alpha" + std::to_string(i), c.alpha[i]);
  write_poly(os, "lambda1", c.lambda1);
  write_poly(os, "lambda2", c.lambda2);
  for (int i = 0; i < 4; ++i) write_poly(os, "K" + std::to_string(i + 1), c.K[i]);
  os.precision(old_precision);
}

}  // namespace nematic
