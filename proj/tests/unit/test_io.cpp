#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "slsv/errors.hpp"
#include "slsv/io.hpp"

using namespace slsv;

namespace {

Snapshot sample_snapshot() {
  const ReferenceElement& e = ReferenceElement::get(2);
  const Field2D f = Field2D::from_function(Grid1D(0, 4 * std::numbers::pi, 3), Grid1D(-2, 2, 4, Boundary::ZeroInflow),
                                           e, [](double x, double v) { return std::sin(x) * std::exp(-v * v) / 3.0; });
  Snapshot s = make_snapshot(f, 0.1 + 0.2, "VP");
  s.values[0] = std::numeric_limits<double>::denorm_min();
  s.values[1] = -0.0;
  s.values[2] = 1e300;
  s.values[3] = -std::numeric_limits<double>::max();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t q = 4; q < s.values.size(); ++q) s.values[q] = u(rng) * std::pow(10.0, u(rng) * 20);
  return s;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Snapshot, RoundtripIsBitIdentical) {
  const Snapshot s = sample_snapshot();
  std::stringstream a;
  write_snapshot(a, s);
  const Snapshot r1 = read_snapshot(a);
  std::stringstream b;
  write_snapshot(b, r1);
  const Snapshot r2 = read_snapshot(b);
  EXPECT_TRUE(bitwise_equal(r1.values, s.values));
  EXPECT_TRUE(bitwise_equal(r2.values, r1.values));
  EXPECT_EQ(r1.t, s.t);
  EXPECT_EQ(r1.x_hi, s.x_hi);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Snapshot, LayoutOfOneDimensionalField) {
  const ReferenceElement& e = ReferenceElement::get(3);
  const Field1D u = Field1D::from_function(Grid1D(0, 1, 5), e, [](double x) { return x * x * x - x; });
  const Snapshot s = make_snapshot(u, 2.0, "Transport1D");
  ASSERT_EQ(s.values.size(), 20u);
  for (int i = 0; i < 5; ++i)
    for (int g = 0; g < 4; ++g) {
      const double x = u.grid().to_physical(i, e.gauss_nodes()[g]);
      EXPECT_NEAR(s.values[i * 4 + g], x * x * x - x, 1e-13);
    }
}

TEST(Snapshot, MalformedInputNamesLine) {
  std::stringstream a;
  write_snapshot(a, sample_snapshot());
  std::string text = a.str();
  const auto pos = text.find("values\n") + 7;
  text.replace(pos, text.find(' ', pos) - pos, "1.2.3");
  std::istringstream is(text);
  try {
    (void)read_snapshot(is);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 13"), std::string::npos) << e.what();
  }
  std::istringstream empty("");
  EXPECT_THROW((void)read_snapshot(empty), ConfigError);
}

TEST(TimeSeries, HeaderAndRow) {
  EXPECT_STREQ(kTimeSeriesHeader,
               "t,l1,l2,energy,entropy,e_l2,e_linf,rel_dev_l1,rel_dev_l2,rel_dev_energy,rel_dev_entropy");
  TimeSeriesRecord r;
  r.t = 0.1;
  r.rel_dev_entropy = -1e-17;
  std::ostringstream os;
  write_record(os, r);
  const std::string row = os.str();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
  EXPECT_EQ(std::stod(row.substr(0, row.find(','))), 0.1);
  EXPECT_EQ(std::stod(row.substr(row.rfind(',') + 1)), -1e-17);
}

TEST(Ladder, OrdersAndFailures) {
  std::vector<LadderRow> rows(4);
  rows[0] = {20, {1.0, 2.0}, {}, {}, ""};
  rows[1] = {40, {0.125, 0.25}, {}, {}, ""};
  rows[2] = {80, {}, {}, {}, "crossing feet"};
  rows[3] = {160, {1e-3, 1e-3}, {}, {}, ""};
  const auto out = ladder_orders(rows, false);
  EXPECT_FALSE(out[0].l2_order);
  EXPECT_NEAR(*out[1].l2_order, 3.0, 1e-14);
  EXPECT_NEAR(*out[1].linf_order, 3.0, 1e-14);
  EXPECT_FALSE(out[2].l2_order);
  EXPECT_FALSE(out[3].l2_order);

  std::vector<LadderRow> single{{16, {1e-3, 2e-3}, {}, {}, ""}};
  EXPECT_FALSE(ladder_orders(single, false)[0].l2_order);

  std::vector<LadderRow> cfl{{20, {1.0, 1.0}, {}, {}, ""}, {40, {4.0, 2.0}, {}, {}, ""}};
  const auto c = ladder_orders(cfl, true);
  EXPECT_NEAR(*c[1].l2_order, 2.0, 1e-14);
  EXPECT_NEAR(*c[1].linf_order, 1.0, 1e-14);
}

TEST(Ladder, CsvHasBlankOrdersAndFailureText) {
  std::vector<LadderRow> rows{{16, {1e-3, 2e-3}, {}, {}, ""}, {32, {}, {}, {}, "boom"}};
  std::ostringstream os;
  write_ladder_csv(os, ladder_orders(rows, false), "cfl", 0.1, "N", true);
  std::istringstream is(os.str());
  std::string header, r1, r2;
  std::getline(is, header);
  std::getline(is, r1);
  std::getline(is, r2);
  EXPECT_EQ(header, "cfl,N,l2,l2_order,linf,linf_order,failure");
  EXPECT_NE(r1.find(",,"), std::string::npos);
  EXPECT_NE(r2.find("boom"), std::string::npos);
}
