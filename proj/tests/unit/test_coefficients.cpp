#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "nematic/coefficients.hpp"
#include "nematic/constitutive.hpp"
#include "nematic/error.hpp"

using namespace nematic;

TEST(Polynomial, EvaluationAndDerivative) {
  const Polynomial p{1.0, -2.0, 0.5};  // 1 - 2w + w^2/2
  EXPECT_DOUBLE_EQ(p(0.0), 1.0);
  EXPECT_DOUBLE_EQ(p(2.0), 1.0 - 4.0 + 2.0);
  EXPECT_DOUBLE_EQ(p.derivative()(3.0), -2.0 + 3.0);
  EXPECT_DOUBLE_EQ(p.derivative().derivative()(7.0), 1.0);
  EXPECT_TRUE(Polynomial{}.is_constant());
  EXPECT_DOUBLE_EQ(Polynomial{}(5.0), 0.0);
  EXPECT_FALSE(p.is_constant());
}

TEST(CoefficientSet, ReferenceValuesAreConstantTerms) {
  CoefficientSet c;
  c.theta_ref = 2.0;
  for (int i = 0; i < 9; ++i) c.alpha[i] = Polynomial{0.1 * i, 0.3, -0.2};
  c.lambda1 = Polynomial{1.5, 0.1};
  c.K[2] = Polynomial{0.7, 0.2, 0.05};
  const MaterialValues m = c.at(2.0);
  for (int i = 0; i < 9; ++i) EXPECT_DOUBLE_EQ(m.alpha[i], 0.1 * i);
  EXPECT_DOUBLE_EQ(m.lambda1, 1.5);
  EXPECT_DOUBLE_EQ(m.K[2], 0.7);
  EXPECT_DOUBLE_EQ(m.dK[2], 0.2);
  EXPECT_DOUBLE_EQ(m.d2K[2], 0.1);
  EXPECT_FALSE(c.frank_isothermal());
}

TEST(CoefficientSet, GammaPolynomialsMatchDefinition) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  CoefficientSet c;
  for (int i = 0; i < 9; ++i) c.alpha[i] = Polynomial{U(rng), U(rng), U(rng)};
  for (double th : {0.3, 1.0, 1.7}) {
    const MaterialValues m = c.at(th);
    EXPECT_NEAR(c.gamma1()(th - c.theta_ref), m.alpha[3] - m.alpha[2], 1e-15);
    EXPECT_NEAR(c.gamma2()(th - c.theta_ref), m.alpha[6] - m.alpha[5], 1e-15);
    EXPECT_DOUBLE_EQ(m.gamma1, m.alpha[3] - m.alpha[2]);
  }
}

TEST(CoefficientSet, Validation) {
  CoefficientSet c;
  EXPECT_NO_THROW(c.validate(2));
  c.n_ref = {0.6, 0.8, 0.0};
  EXPECT_NO_THROW(c.validate(2));
  c.n_ref = {0.6, 0.0, 0.8};
  EXPECT_THROW(c.validate(2), Error);
  EXPECT_NO_THROW(c.validate(3));
  c.n_ref = {1.0, 1e-6, 0.0};
  EXPECT_THROW(c.validate(3), Error);
  c.n_ref = {1.0, 0.0, 0.0};
  c.theta_ref = -1.0;
  EXPECT_THROW(c.validate(3), Error);
}

TEST(CoefficientSet, SectionParsing) {
  const auto doc = kv::parse(
      "[coefficients]\ntheta_ref = 1.5\nn_ref = [0, 1]\nalpha4 = [1.0, 0.1]\nalpha3 = 0.5\nK1 = 2\n", "c.ini");
  const CoefficientSet c = coefficients_from_section(doc, *doc.find("coefficients"), 2);
  EXPECT_DOUBLE_EQ(c.theta_ref, 1.5);
  EXPECT_DOUBLE_EQ(c.n_ref[1], 1.0);
  EXPECT_DOUBLE_EQ(c.alpha[4](1.0), 1.1);
  EXPECT_DOUBLE_EQ(c.alpha[3](4.0), 0.5);
  EXPECT_DOUBLE_EQ(c.K[0](0.0), 2.0);
  EXPECT_DOUBLE_EQ(c.alpha[0](3.0), 0.0);
}

TEST(CoefficientSet, MalformedPolynomialReportsLocation) {
  const auto doc = kv::parse("[coefficients]\n\nalpha4 = [1.0, oops]\n", "bad.ini");
  try {
    coefficients_from_section(doc, *doc.find("coefficients"), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
    EXPECT_NE(std::string(e.what()).find("bad.ini:3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("alpha4"), std::string::npos);
  }
  const auto unknown = kv::parse("[coefficients]\nalpha9 = 1\n");
  EXPECT_THROW(coefficients_from_section(unknown, *unknown.find("coefficients"), 3), Error);
  const auto both = kv::parse("[coefficients]\nK1 = 1\nk11 = 1\n");
  EXPECT_THROW(coefficients_from_section(both, *both.find("coefficients"), 3), Error);
  const auto nonunit = kv::parse("[coefficients]\nn_ref = [1, 1]\n");
  EXPECT_THROW(coefficients_from_section(nonunit, *nonunit.find("coefficients"), 2), Error);
}

TEST(CoefficientSet, WriteReadRoundTrip) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-1, 1);
  CoefficientSet c;
  c.theta_ref = 1.25;
  c.n_ref = {0.0, 0.6, 0.8};
  for (int i = 0; i < 9; ++i) c.alpha[i] = Polynomial{U(rng), U(rng)};
  c.lambda1 = Polynomial{U(rng)};
  c.lambda2 = Polynomial{U(rng), U(rng), U(rng)};
  for (auto& k : c.K) k = Polynomial{U(rng)};
  std::ostringstream os;
  write_coefficients(os, c, 3);
  const auto doc = kv::parse(os.str());
  const CoefficientSet r = coefficients_from_section(doc, *doc.find("coefficients"), 3);
  EXPECT_EQ(r.theta_ref, c.theta_ref);
  EXPECT_EQ(r.n_ref, c.n_ref);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(r.alpha[i].coefficients(), c.alpha[i].coefficients());
  EXPECT_EQ(r.lambda2.coefficients(), c.lambda2.coefficients());
  for (int i = 0; i < 4; ++i) EXPECT_EQ(r.K[i].coefficients(), c.K[i].coefficients());
}

// Classical splay/twist/bend/saddle-splay density written with div and curl:
// k11/2 (div n)^2 + k22/2 (n . curl n)^2 + k33/2 |n x curl n|^2 - (k22+k24)/2 [(div n)^2 - tr(G^2)].
TEST(CoefficientSet, ClassicalConverterMatchesCurlForm) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0.1, 2.0);
  using pointwise::Mat3;
  using pointwise::Vec3;
  for (int t = 0; t < 50; ++t) {
    const double k11 = U(rng), k22 = U(rng), k24 = U(rng) - 1.0, k33 = U(rng);
    const auto K = frank_from_classical(Polynomial{k11}, Polynomial{k22}, Polynomial{k24}, Polynomial{k33});
    Vec3 n(N(rng), N(rng), N(rng));
    n.normalize();
    Mat3 G;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G(i, j) = N(rng);
    G -= n * (n.transpose() * G);  // unit length: n_k d_j n_k = 0
    const Vec3 curl(G(2, 1) - G(1, 2), G(0, 2) - G(2, 0), G(1, 0) - G(0, 1));
    const double div = G.trace();
    const double classical = 0.5 * k11 * div * div + 0.5 * k22 * std::pow(n.dot(curl), 2) +
                             0.5 * k33 * n.cross(curl).squaredNorm() -
                             0.5 * (k22 + k24) * (div * div - (G * G).trace());
    const std::array<double, 4> Kv{K[0](0), K[1](0), K[2](0), K[3](0)};
    EXPECT_NEAR(pointwise::oseen_frank(Kv, n, G), classical, 1e-12 * (1.0 + std::abs(classical)));
  }
}

TEST(CoefficientSet, IsotropicPreset) {
  const CoefficientSet c = isotropic_coefficients(3, 2.0, 0.5, 1.5, 3.0);
  const MaterialValues m = c.at(c.theta_ref);
  EXPECT_DOUBLE_EQ(m.alpha[4], 2.0);
  EXPECT_DOUBLE_EQ(m.gamma1, 3.0);
  EXPECT_DOUBLE_EQ(m.gamma2, 0.0);
  EXPECT_DOUBLE_EQ(m.K[0], 0.5);
  EXPECT_DOUBLE_EQ(m.lambda1, 1.5);
  EXPECT_TRUE(c.frank_isothermal());
}
