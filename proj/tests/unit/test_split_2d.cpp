#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "slsv/errors.hpp"
#include "slsv/split_2d.hpp"

using namespace slsv;

namespace {

constexpr double kPi = std::numbers::pi;

LineCoefficient constant_speed(double c) {
  return [c](double, int, int) { return VelocityField1D::constant(c); };
}

// Gauss-node L2 error, absolute integral.
double l2_error(const Field2D& f, const std::function<double(double, double)>& exact) {
  const ReferenceElement& e = f.elem();
  const QuadratureRule q = gauss_rule(e.degree() + 3);
  double acc = 0.0;
  for (int i = 0; i < f.grid_x().n_cells; ++i)
    for (int j = 0; j < f.grid_y().n_cells; ++j)
      for (int a = 0; a < q.npts(); ++a)
        for (int b = 0; b < q.npts(); ++b) {
          const double d = f.eval_reference(i, j, q.nodes[a], q.nodes[b]) -
                           exact(f.grid_x().to_physical(i, q.nodes[a]), f.grid_y().to_physical(j, q.nodes[b]));
          acc += 0.25 * q.weights[a] * q.weights[b] * d * d;
        }
  return std::sqrt(acc * f.grid_x().h() * f.grid_y().h());
}

}  // namespace

TEST(Field2D, ConstantLinesExtractAsConstants) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Field2D f = Field2D::from_function(Grid1D(0, 1, 4), Grid1D(0, 2, 5), e, [](double, double) { return 3.5; });
  for (Direction d : {Direction::X, Direction::Y}) {
    const Field1D line = extract_line(f, 1, 2, d);
    for (double v : line.dof()) EXPECT_NEAR(v, 3.5, 1e-14);
  }
  EXPECT_NEAR(f.mass(), 7.0, 1e-13);
}

TEST(Field2D, SeparableProductLineIsScaledProfile) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Grid1D gx(0, 1, 3), gy(0, 1, 4);
  const Field2D f = Field2D::from_function(gx, gy, e, [](double x, double y) { return x * y; });
  const int j = 2, m = 1;
  const double y = gy.to_physical(j, e.gauss_nodes()[m]);
  const Field1D line = extract_line(f, j, m, Direction::X);
  const Field1D ref = Field1D::from_function(gx, e, [y](double x) { return x * y; });
  for (std::size_t q = 0; q < line.dof().size(); ++q) EXPECT_NEAR(line.dof()[q], ref.dof()[q], 1e-14);
}

TEST(Field2D, ExtractReassembleRoundtrip) {
  const ReferenceElement& e = ReferenceElement::get(3);
  const Field2D f = Field2D::from_function(Grid1D(0, 1, 5), Grid1D(-1, 1, 6), e,
                                           [](double x, double y) { return std::sin(3 * x) * std::exp(y); });
  for (Direction d : {Direction::X, Direction::Y}) {
    Field2D g(f.grid_x(), f.grid_y(), e);
    const int ncross = d == Direction::X ? 6 : 5;
    for (int c = 0; c < ncross; ++c)
      for (int node = 0; node < e.ndof(); ++node) reassemble_line(g, extract_line(f, c, node, d), c, node, d);
    for (std::size_t q = 0; q < f.values().size(); ++q) EXPECT_NEAR(g.values()[q], f.values()[q], 1e-13);
  }
}

TEST(Field2D, EvalReproducesPolynomial) {
  const ReferenceElement& e = ReferenceElement::get(2);
  auto p = [](double x, double y) { return 1 + x - 2 * y + x * x * y * y - 0.5 * x * y; };
  const Field2D f = Field2D::from_function(Grid1D(0, 1, 3), Grid1D(0, 1, 3), e, p);
  for (double x : {0.05, 0.4, 0.93})
    for (double y : {0.11, 0.5, 0.77}) EXPECT_NEAR(f.eval(x, y), p(x, y), 1e-13);
}

TEST(Sweep, ZeroSpeedIsIdentity) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Field2D f = Field2D::from_function(Grid1D(0, 1, 6), Grid1D(0, 1, 7), e,
                                           [](double x, double y) { return std::cos(2 * kPi * x) + y; });
  for (Direction d : {Direction::X, Direction::Y}) {
    const Field2D g = sweep(f, SweepPlan{d, 0.1, constant_speed(0.0)}, 0.1);
    for (std::size_t q = 0; q < f.values().size(); ++q) EXPECT_NEAR(g.values()[q], f.values()[q], 1e-13);
  }
}

TEST(Sweep, IntegerShiftPermutesCells) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Grid1D gx(0, 1, 8), gy(0, 1, 5);
  const Field2D f = Field2D::from_function(gx, gy, e, [](double x, double y) { return std::sin(2 * kPi * x) * (1 + y); });
  const Field2D g = sweep(f, SweepPlan{Direction::X, 1.0, constant_speed(3 * gx.h())}, 1.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 5; ++j)
      for (int q = 0; q < e.ndof() * e.ndof(); ++q)
        EXPECT_NEAR(g.cell(i, j)[q], f.cell((i + 5) % 8, j)[q], 1e-13);
}

TEST(Sweep, MassConservedWithVariableSpeed) {
  const ReferenceElement& e = ReferenceElement::get(3);
  const Field2D f = Field2D::from_function(Grid1D(-kPi, kPi, 12), Grid1D(-kPi, kPi, 12), e,
                                           [](double x, double y) { return std::exp(-x * x - 2 * y * y); });
  const LineCoefficient a = [](double y, int, int) {
    return VelocityField1D::analytic([y](double x, double) { return std::sin(x) * y + 0.3; });
  };
  const Field2D g = sweep(f, SweepPlan{Direction::X, 0.2, a}, 0.2);
  EXPECT_NEAR(g.mass(), f.mass(), 1e-12);
}

TEST(Sweep, SeparableSweepsCommute) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Field2D f = Field2D::from_function(Grid1D(0, 1, 10), Grid1D(0, 1, 10), e,
                                           [](double x, double y) { return std::sin(2 * kPi * x) * std::cos(2 * kPi * y); });
  const SweepPlan px{Direction::X, 0.37, constant_speed(0.5)};
  const SweepPlan py{Direction::Y, 0.37, constant_speed(-0.8)};
  const Field2D xy = sweep(sweep(f, px, 0.37), py, 0.37);
  const Field2D yx = sweep(sweep(f, py, 0.37), px, 0.37);
  for (std::size_t q = 0; q < f.values().size(); ++q) EXPECT_NEAR(xy.values()[q], yx.values()[q], 1e-11);
}

TEST(Sweep, FailureNamesLineAndDirection) {
  const ReferenceElement& e = ReferenceElement::get(1);
  const Field2D f(Grid1D(0, 1, 4), Grid1D(0, 1, 4), e);
  const LineCoefficient a = [](double, int, int) {
    std::vector<double> v(4 * 3, 0.0);
    v[3] = -1.0;  // the first two CV boundaries of SV 1 swap feet
    v[4] = 1.0;
    return VelocityField1D::per_point(v);
  };
  try {
    (void)sweep(f, SweepPlan{Direction::Y, 0.2, a}, 0.2);
    FAIL() << "expected SolverError";
  } catch (const SolverError& err) {
    const std::string msg = err.what();
    EXPECT_NE(msg.find("SV"), std::string::npos);
    EXPECT_NE(msg.find("line 0"), std::string::npos);
    EXPECT_NE(msg.find("y-sweep"), std::string::npos);
  }
}

TEST(Strang, LinearAdvectionOrderAtLeastK) {
  const int k = 2;
  const ReferenceElement& e = ReferenceElement::get(k);
  auto f0 = [](double x, double y) { return std::sin(x + y); };
  const double T = 1.0;
  std::vector<double> err;
  for (int N : {10, 20, 40}) {
    const Grid1D g(0, 2 * kPi, N);
    Field2D f = Field2D::from_function(g, g, e, f0);
    const int steps = static_cast<int>(std::ceil(T / (0.9 * g.h())));
    const double dt = T / steps;
    for (int s = 0; s < steps; ++s) f = strang_step(f, constant_speed(1.0), constant_speed(1.0), s * dt, dt);
    err.push_back(l2_error(f, [&](double x, double y) { return f0(x - T, y - T); }));
  }
  for (std::size_t r = 1; r < err.size(); ++r) EXPECT_GT(std::log2(err[r - 1] / err[r]), k + 0.7);
}

TEST(Strang, PPLimiterKeepsSmoothProfileNonnegative) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Grid1D g(-1, 1, 20);
  auto bump = [](double x, double y) {
    const double r2 = x * x + y * y;
    return r2 < 0.25 ? std::pow(std::cos(kPi * std::sqrt(r2)), 4) : 0.0;
  };
  Field2D f = Field2D::from_function(g, g, e, bump);
  LimiterConfig lim;
  lim.pp_enabled = true;
  pp_limit_field(f);
  const double m0 = f.mass();
  for (int s = 0; s < 10; ++s) f = strang_step(f, constant_speed(0.7), constant_speed(-0.4), s * 0.05, 0.05, &lim);
  double mn = 0.0;
  EXPECT_EQ(pp_limit_field(f, &mn), 0);
  EXPECT_GE(mn, -1e-12);
  EXPECT_NEAR(f.mass(), m0, 1e-12);
}

TEST(Strang, PPFailuresCountNegativeMeans) {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Grid1D g(-1, 1, 20);
  Field2D f = Field2D::from_function(g, g, e, [](double x, double y) { return x * x + y * y < 0.25 ? 1.0 : 0.0; });
  LimiterConfig lim;
  lim.pp_enabled = true;
  const double m0 = f.mass();
  for (int s = 0; s < 5; ++s) f = strang_step(f, constant_speed(0.7), constant_speed(-0.4), s * 0.05, 0.05, &lim);
  int negative = 0;
  for (int i = 0; i < g.n_cells; ++i)
    for (int j = 0; j < g.n_cells; ++j) negative += f.cell_mean(i, j) < 0.0;
  EXPECT_EQ(pp_limit_field(f), negative);
  EXPECT_NEAR(f.mass(), m0, 1e-12);
}
