#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slsv/errors.hpp"
#include "slsv/field_solver.hpp"

using namespace slsv;

namespace {

constexpr double kPi = std::numbers::pi;

DensityField density_from(const Grid1D& g, const ReferenceElement& e, const std::function<double(double)>& rho) {
  DensityField d{Field1D::from_function(g, e, rho), 0.0};
  d.rho0 = d.rho.mass() / g.length();
  return d;
}

double l2_diff(const Field1D& a, const std::function<double(double)>& b) {
  const QuadratureRule q = gauss_rule(a.elem().degree() + 3);
  double acc = 0.0;
  for (int i = 0; i < a.n_cells(); ++i) {
    const LocalPoly p = a.poly(i);
    for (int j = 0; j < q.npts(); ++j) {
      const double d = p(q.nodes[j]) - b(a.grid().to_physical(i, q.nodes[j]));
      acc += 0.5 * a.grid().h() * q.weights[j] * d * d;
    }
  }
  return std::sqrt(acc);
}

double l2_between(const Field1D& a, const Field1D& b) {
  return l2_diff(a, [&](double x) { return b.eval(x); });
}

// Smooth periodic density with several modes.
double smooth_rho(double x) { return 1.0 + 0.3 * std::cos(x) - 0.2 * std::sin(2 * x) + 0.1 * std::cos(5 * x + 0.3); }

}  // namespace

TEST(DensityMoment, ConstantDistribution) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const double vmax = 2 * kPi;
  const Field2D f = Field2D::from_function(Grid1D(0, 4 * kPi, 8), Grid1D(-vmax, vmax, 10, Boundary::ZeroInflow), e,
                                           [](double, double) { return 0.7; });
  const DensityField d = density_moment(f);
  for (double v : d.rho.dof()) EXPECT_NEAR(v, 0.7 * 2 * vmax, 1e-13);
  EXPECT_NEAR(d.rho0, 0.7 * 2 * vmax, 1e-13);
}

TEST(DensityMoment, MaxwellianTruncation) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const double vmax = 2 * kPi;
  const Field2D f = Field2D::from_function(Grid1D(0, 1, 4), Grid1D(-vmax, vmax, 128, Boundary::ZeroInflow), e,
                                           [](double, double v) { return std::exp(-0.5 * v * v) / std::sqrt(2 * kPi); });
  const double delta = std::erfc(vmax / std::sqrt(2.0));
  EXPECT_LT(delta, 1e-8);
  const DensityField d = density_moment(f);
  for (double v : d.rho.dof()) EXPECT_NEAR(v, 1.0 - delta, 1e-8);
}

TEST(DensityMoment, WeakLandauSeparable) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const double vmax = 2 * kPi;
  const Grid1D gx(0, 4 * kPi, 32);
  const Field2D f = Field2D::from_function(gx, Grid1D(-vmax, vmax, 128, Boundary::ZeroInflow), e, [](double x, double v) {
    return (1 + 0.01 * std::cos(0.5 * x)) * std::exp(-0.5 * v * v) / std::sqrt(2 * kPi);
  });
  const DensityField d = density_moment(f);
  // Nodal sampling of the x profile is exact for the Q^k data; compare CV averages of the interpolant.
  std::vector<double> nodal(static_cast<std::size_t>(e.ndof()));
  for (int i = 0; i < gx.n_cells; ++i) {
    for (int g = 0; g < e.ndof(); ++g) nodal[g] = 1 + 0.01 * std::cos(0.5 * gx.to_physical(i, e.gauss_nodes()[g]));
    std::vector<double> avg(nodal.size());
    e.nodal_to_avg().apply(nodal, avg);
    for (int c = 0; c < e.ndof(); ++c) EXPECT_NEAR(d.rho.cell(i)[c], avg[c], 1e-8);
  }
  EXPECT_NEAR(d.rho0, 1.0, 1e-8);
}

TEST(LdgSolve, ZeroSourceGivesZeroField) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const DensityField d = density_from(Grid1D(0, 2 * kPi, 16), e, [](double) { return 1.0; });
  const EFieldState s = ldg_solve(d);
  for (double v : s.E.dof()) EXPECT_NEAR(v, 0.0, 1e-13);
  EXPECT_NEAR(s.max_abs, 0.0, 1e-13);
}

TEST(LdgSolve, CosineSourceGivesSineWithOptimalOrder) {
  for (int k = 1; k <= 3; ++k) {
    const ReferenceElement& e = ReferenceElement::get(k);
    std::vector<double> err;
    for (int N : {16, 32, 64}) {
      const Grid1D g(0, 2 * kPi, N);
      const EFieldState s = ldg_solve(density_from(g, e, [](double x) { return std::cos(x); }));
      err.push_back(l2_diff(s.E, [](double x) { return std::sin(x); }));
    }
    for (std::size_t r = 1; r < err.size(); ++r) EXPECT_GE(err[r - 1] / err[r], std::pow(2.0, k + 0.8)) << k;
  }
}

TEST(LdgSolve, ResidualAndZeroMean) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Grid1D g(0, 4 * kPi, 64);
  const LdgSolver solver(g, e);
  const EFieldState s = solver.solve(density_from(g, e, smooth_rho));
  EXPECT_LE(solver.last_residual(), 1e-11);
  EXPECT_LE(std::abs(s.E.mass()), 1e-11);
}

TEST(LdgSolve, GaussLawWeakResidual) {
  // Cellwise: -int E P_l' ds + E^+(x_{i+1/2}) - E^+(x_{i-1/2}) (-1)^l = (h/2) int (rho - rho0) P_l ds.
  const ReferenceElement& e = ReferenceElement::get(3);
  const Grid1D g(0, 2 * kPi, 24);
  const DensityField d = density_from(g, e, smooth_rho);
  const EFieldState s = ldg_solve(d);
  const QuadratureRule q = gauss_rule(8);
  const int N = g.n_cells;
  for (int i = 0; i < N; ++i) {
    const LocalPoly Ei = s.E.poly(i);
    const LocalPoly En = s.E.poly((i + 1) % N);
    const LocalPoly ri = d.rho.poly(i);
    for (int l = 0; l <= 3; ++l) {
      double lhs = En(-1.0) - Ei(-1.0) * std::pow(-1.0, l);
      double rhs = 0.0;
      for (int j = 0; j < q.npts(); ++j) {
        const double s0 = q.nodes[j];
        double dP = 0.0;
        for (int m = l - 1; m >= 0; m -= 2) dP += (2 * m + 1) * legendre(m, s0);
        lhs -= q.weights[j] * Ei(s0) * dP;
        rhs += 0.5 * g.h() * q.weights[j] * (ri(s0) - d.rho0) * legendre(l, s0);
      }
      EXPECT_NEAR(lhs, rhs, 1e-10) << "cell " << i << " l " << l;
    }
  }
}

TEST(LdgSolve, RejectsIncompatibleDensity) {
  const ReferenceElement& e = ReferenceElement::get(1);
  DensityField d{Field1D::from_function(Grid1D(0, 1, 8), e, [](double) { return 2.0; }), 1.0};
  EXPECT_THROW((void)ldg_solve(d), ContractError);
  EXPECT_THROW((void)direct_solve(d), ContractError);
}

TEST(DirectSolve, MatchesLdg) {
  for (int k = 1; k <= 2; ++k) {
    const ReferenceElement& e = ReferenceElement::get(k);
    for (int N : {16, 32, 64}) {
      const DensityField d = density_from(Grid1D(0, 4 * kPi, N), e, smooth_rho);
      const EFieldState a = ldg_solve(d);
      const EFieldState b = direct_solve(d);
      EXPECT_LE(l2_between(a.E, b.E), 1e-9) << "k " << k << " N " << N;
      EXPECT_LE(std::abs(b.E.mass()), 1e-11);
    }
  }
}

TEST(DirectSolve, CosineGivesSine) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const EFieldState s = direct_solve(density_from(Grid1D(0, 2 * kPi, 64), e, [](double x) { return std::cos(x); }));
  EXPECT_LE(l2_diff(s.E, [](double x) { return std::sin(x); }), 1e-5);
}

TEST(DirectSolve, ContinuousForLowDegreeSource) {
  // Piecewise degree k-1 density: the antiderivative is degree k and represented exactly.
  const ReferenceElement& e = ReferenceElement::get(3);
  const Grid1D g(0, 1, 10);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> modal(static_cast<std::size_t>(g.n_cells) * e.ndof(), 0.0);
  for (int i = 0; i < g.n_cells; ++i)
    for (int m = 0; m < e.degree(); ++m) modal[static_cast<std::size_t>(i) * e.ndof() + m] = 2.0 + U(rng);
  DensityField d{Field1D::from_modal(g, e, modal), 0.0};
  d.rho0 = d.rho.mass() / g.length();
  const EFieldState s = direct_solve(d);
  for (int i = 0; i < g.n_cells; ++i)
    EXPECT_NEAR(s.E.poly(i)(1.0), s.E.poly((i + 1) % g.n_cells)(-1.0), 1e-13);
}

TEST(MaxAbsE, SineAndHomogeneity) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Grid1D g(0, 2 * kPi, 160);
  const Field1D E = Field1D::from_function(g, e, [](double x) { return std::sin(x); });
  EXPECT_NEAR(max_abs_E(E), 1.0, 1e-3);
  const Field1D E3 = Field1D::from_function(g, e, [](double x) { return -3 * std::sin(x); });
  EXPECT_NEAR(max_abs_E(E3), 3 * max_abs_E(E), 1e-12);
  EXPECT_EQ(max_abs_E(Field1D(g, e)), 0.0);
}
