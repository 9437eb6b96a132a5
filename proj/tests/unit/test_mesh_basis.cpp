#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slsv/errors.hpp"
#include "slsv/mesh_basis.hpp"

using namespace slsv;

namespace {

// Exact integral of s^p over [a, b].
double monomial_integral(int p, double a, double b) {
  return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
}

}  // namespace

TEST(GaussRule, MidpointAndTwoPoint) {
  const QuadratureRule r1 = gauss_rule(1);
  ASSERT_EQ(r1.npts(), 1);
  EXPECT_EQ(r1.nodes[0], 0.0);
  EXPECT_DOUBLE_EQ(r1.weights[0], 2.0);

  const QuadratureRule r2 = gauss_rule(2);
  EXPECT_NEAR(r2.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r2.weights[1], 1.0, 1e-15);
}

TEST(GaussRule, FivePointsIntegrateS8) {
  const QuadratureRule r = gauss_rule(5);
  double acc = 0.0;
  for (int i = 0; i < r.npts(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], 8);
  EXPECT_NEAR(acc, 2.0 / 9.0, 1e-14);
}

TEST(GaussRule, ExactForDegreeTwoNMinusOne) {
  for (int n = 1; n <= 12; ++n) {
    const QuadratureRule r = gauss_rule(n);
    double wsum = 0.0;
    for (double w : r.weights) {
      EXPECT_GT(w, 0.0);
      wsum += w;
    }
    EXPECT_NEAR(wsum, 2.0, 1e-14) << "n=" << n;
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = monomial_integral(p, -1.0, 1.0);
      EXPECT_NEAR(acc, exact, 1e-14 * std::max(1.0, std::abs(exact))) << "n=" << n << " p=" << p;
    }
    for (int i = 0; i < n; ++i) EXPECT_EQ(r.nodes[i], -r.nodes[n - 1 - i]);
  }
}

TEST(GaussRule, RejectsOutOfRange) {
  EXPECT_THROW(gauss_rule(0), ConfigError);
  EXPECT_THROW(gauss_rule(13), ConfigError);
}

TEST(ReferenceElement, CvBoundsK1K2) {
  const auto& e1 = ReferenceElement::get(1);
  ASSERT_EQ(e1.cv_bounds().size(), 3u);
  EXPECT_EQ(e1.cv_bounds()[0], -1.0);
  EXPECT_EQ(e1.cv_bounds()[1], 0.0);
  EXPECT_EQ(e1.cv_bounds()[2], 1.0);

  const auto& e2 = ReferenceElement::get(2);
  ASSERT_EQ(e2.cv_bounds().size(), 4u);
  EXPECT_NEAR(e2.cv_bounds()[1], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(e2.cv_bounds()[2], 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(ReferenceElement, RejectsOutOfRange) {
  EXPECT_THROW(ReferenceElement(0), ConfigError);
  EXPECT_THROW(ReferenceElement(7), ConfigError);
  EXPECT_THROW(ReferenceElement::get(9), ConfigError);
}

TEST(ReferenceElement, SquareReconstructsToLegendreProjection) {
  const auto& e = ReferenceElement::get(2);
  // Oracle: c_m = (2m+1)/2 * int s^2 P_m ds by a 10-point rule.
  const QuadratureRule q = gauss_rule(10);
  std::vector<double> oracle(3, 0.0);
  for (int m = 0; m < 3; ++m) {
    for (int g = 0; g < q.npts(); ++g) oracle[m] += q.weights[g] * q.nodes[g] * q.nodes[g] * legendre(m, q.nodes[g]);
    oracle[m] *= (2.0 * m + 1.0) / 2.0;
  }
  EXPECT_NEAR(oracle[0], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(oracle[2], 2.0 / 3.0, 1e-14);

  const LocalPoly sq{0, {1.0 / 3.0, 0.0, 2.0 / 3.0}};
  const auto avgs = cv_averages(sq, e);
  const LocalPoly back = reconstruct(avgs, e);
  for (int m = 0; m < 3; ++m) EXPECT_NEAR(back.coeffs[m], oracle[m], 1e-14);
}

TEST(ReferenceElement, CvAveragesOfSquareMatchAnalytic) {
  const auto& e = ReferenceElement::get(2);
  const LocalPoly sq{0, {1.0 / 3.0, 0.0, 2.0 / 3.0}};
  const auto avgs = cv_averages(sq, e);
  const auto b = e.cv_bounds();
  for (int p = 0; p < 3; ++p) {
    const double exact = monomial_integral(2, b[p], b[p + 1]) / (b[p + 1] - b[p]);
    EXPECT_NEAR(avgs[p], exact, 1e-15);
  }
}

TEST(Reconstruct, ConstantsAndLinear) {
  for (int k = 1; k <= 6; ++k) {
    const auto& e = ReferenceElement::get(k);
    std::vector<double> avgs(e.ndof(), 2.5);
    const LocalPoly p = reconstruct(avgs, e);
    for (double s : {-1.0, -0.3, 0.0, 0.7, 1.0}) EXPECT_NEAR(p(s), 2.5, 1e-13);
  }
  const auto& e1 = ReferenceElement::get(1);
  const LocalPoly lin = reconstruct(std::vector<double>{-0.5, 0.5}, e1);
  EXPECT_NEAR(lin.coeffs[0], 0.0, 1e-15);
  EXPECT_NEAR(lin.coeffs[1], 1.0, 1e-15);
}

TEST(Reconstruct, RoundtripTriple) {
  const auto& e = ReferenceElement::get(2);
  const std::vector<double> avgs{0.3, 1.1, -0.4};
  const auto back = cv_averages(reconstruct(avgs, e), e);
  for (int p = 0; p < 3; ++p) EXPECT_NEAR(back[p], avgs[p], 1e-13 * std::abs(avgs[p]));
}

TEST(Reconstruct, IdentityOnRandomPolynomials) {
  std::mt19937_64 rng(20241016);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int k = 1; k <= 6; ++k) {
    const auto& e = ReferenceElement::get(k);
    for (int trial = 0; trial < 50; ++trial) {
      LocalPoly q{0, std::vector<double>(e.ndof())};
      for (double& c : q.coeffs) c = dist(rng);
      const LocalPoly back = reconstruct(cv_averages(q, e), e);
      double scale = 0.0;
      for (double c : q.coeffs) scale = std::max(scale, std::abs(c));
      for (int m = 0; m <= k; ++m) EXPECT_NEAR(back.coeffs[m], q.coeffs[m], 1e-12 * scale);
    }
  }
}

TEST(ReferenceElement, SymmetryConditioningAndInverse) {
  for (int k = 1; k <= 6; ++k) {
    const auto& e = ReferenceElement::get(k);
    const auto b = e.cv_bounds();
    for (int p = 0; p <= k + 1; ++p) EXPECT_EQ(b[p], -b[k + 1 - p]);
    for (int p = 0; p <= k; ++p) EXPECT_LT(b[p], b[p + 1]);
    EXPECT_TRUE(std::isfinite(e.recon_condition()));
    EXPECT_LT(e.recon_condition(), 1e4) << "k=" << k;
    const SmallMatrix id = e.averaging() * e.recon_matrix();
    for (int r = 0; r <= k; ++r)
      for (int c = 0; c <= k; ++c) EXPECT_NEAR(id(r, c), r == c ? 1.0 : 0.0, 1e-13);
    const SmallMatrix id2 = e.modal_to_nodal() * e.nodal_to_modal();
    for (int r = 0; r <= k; ++r)
      for (int c = 0; c <= k; ++c) EXPECT_NEAR(id2(r, c), r == c ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Grid1D, AffineMaps) {
  const Grid1D g(0.0, 2.0 * std::numbers::pi, 4);
  EXPECT_NEAR(g.to_physical(0, 0.0), std::numbers::pi / 4.0, 1e-15);

  for (int i = 0; i < 4; ++i) {
    for (double s : {-0.9, -0.2, 0.0, 0.55, 0.99}) {
      const CellCoord c = g.to_reference(g.to_physical(i, s));
      EXPECT_EQ(c.cell, i);
      EXPECT_NEAR(c.s, s, 1e-14);
      EXPECT_EQ(c.wraps, 0);
    }
  }
  const CellCoord a = g.to_reference(2.0 * std::numbers::pi + 0.1);
  const CellCoord b = g.to_reference(0.1);
  EXPECT_EQ(a.cell, b.cell);
  EXPECT_NEAR(a.s, b.s, 1e-14);
  EXPECT_EQ(a.wraps, 1);
}

TEST(Grid1D, ZeroInflowOutOfDomain) {
  const Grid1D g(-1.0, 1.0, 8, Boundary::ZeroInflow);
  EXPECT_FALSE(g.to_reference(-1.2).inside);
  EXPECT_FALSE(g.to_reference(1.0001).inside);
  const CellCoord edge = g.to_reference(1.0);
  EXPECT_TRUE(edge.inside);
  EXPECT_EQ(edge.cell, 7);
  EXPECT_NEAR(edge.s, 1.0, 1e-15);
}
