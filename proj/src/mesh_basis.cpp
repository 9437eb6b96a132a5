#include "slsv/mesh_basis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "slsv/errors.hpp"

namespace slsv {

double legendre(int m, double s) {
  if (m == 0) return 1.0;
  double p0 = 1.0;
  double p1 = s;
  for (int j = 2; j <= m; ++j) {
    const double p2 = ((2 * j - 1) * s * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void legendre_all(double s, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = s;
  for (std::size_t j = 2; j < out.size(); ++j) {
    out[j] = ((2.0 * j - 1.0) * s * out[j - 1] - (j - 1.0) * out[j - 2]) / static_cast<double>(j);
  }
}

double legendre_series(std::span<const double> coeffs, double s) {
  if (coeffs.empty()) return 0.0;
  double p0 = 1.0;
  double sum = coeffs[0];
  if (coeffs.size() == 1) return sum;
  double p1 = s;
  sum += coeffs[1] * p1;
  for (std::size_t j = 2; j < coeffs.size(); ++j) {
    const double p2 = ((2.0 * j - 1.0) * s * p1 - (j - 1.0) * p0) / static_cast<double>(j);
    sum += coeffs[j] * p2;
    p0 = p1;
    p1 = p2;
  }
  return sum;
}

namespace {

// Returns (P_n(s), P_n'(s)).
std::array<double, 2> legendre_with_derivative(int n, double s) {
  double p0 = 1.0;
  double p1 = s;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2 * j - 1) * s * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (s * p1 - p0) / (s * s - 1.0);
  return {p1, dp};
}

}  // namespace

std::vector<double> legendre_roots(int n) {
  if (n < 1) throw ConfigError("legendre_roots: degree must be >= 1, got " + std::to_string(n));
  std::vector<double> roots(static_cast<std::size_t>(n), 0.0);
  // Newton on the positive half only; the negative half is mirrored so the
  // node set is exactly symmetric.
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    roots[static_cast<std::size_t>(n - 1 - i)] = x;
    roots[static_cast<std::size_t>(i)] = -x;
  }
  return roots;
}

QuadratureRule gauss_rule(int n) {
  if (n < 1 || n > 12) {
    throw ConfigError("gauss_rule: number of points must be in [1, 12], got " + std::to_string(n));
  }
  QuadratureRule rule;
  rule.nodes = legendre_roots(n);
  rule.weights.resize(rule.nodes.size());
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double dp = legendre_with_derivative(n, x)[1];
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (rule.weights[static_cast<std::size_t>(i)] +
                            rule.weights[static_cast<std::size_t>(n - 1 - i)]);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

void SmallMatrix::apply(std::span<const double> in, std::span<double> out) const {
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    const double* row = &a[static_cast<std::size_t>(r) * n];
    for (int c = 0; c < n; ++c) acc += row[c] * in[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
}

double SmallMatrix::norm_inf() const {
  double best = 0.0;
  for (int r = 0; r < n; ++r) {
    double row = 0.0;
    for (int c = 0; c < n; ++c) row += std::abs((*this)(r, c));
    best = std::max(best, row);
  }
  return best;
}

SmallMatrix operator*(const SmallMatrix& lhs, const SmallMatrix& rhs) {
  SmallMatrix out(lhs.n);
  for (int r = 0; r < lhs.n; ++r)
    for (int c = 0; c < lhs.n; ++c) {
      double acc = 0.0;
      for (int j = 0; j < lhs.n; ++j) acc += lhs(r, j) * rhs(j, c);
      out(r, c) = acc;
    }
  return out;
}

SmallMatrix inverse(const SmallMatrix& m) {
  Eigen::MatrixXd dense(m.n, m.n);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) dense(r, c) = m(r, c);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
  if (!lu.isInvertible()) throw SolverError("inverse: singular small matrix");
  const Eigen::MatrixXd inv = lu.inverse();
  SmallMatrix out(m.n);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) out(r, c) = inv(r, c);
  return out;
}

ReferenceElement::ReferenceElement(int k) : k_(k) {
  if (k < 1 || k > 6) {
    throw ConfigError("reference_element: degree k must be in [1, 6], got " + std::to_string(k));
  }
  const int n = k + 1;

  cv_bounds_.reserve(static_cast<std::size_t>(k + 2));
  cv_bounds_.push_back(-1.0);
  for (double r : legendre_roots(k)) cv_bounds_.push_back(r);
  cv_bounds_.push_back(1.0);
  for (int p = 0; p <= k; ++p) cv_widths_.push_back(cv_bounds_[p + 1] - cv_bounds_[p]);

  gauss_ = gauss_rule(n);

  // Row p: averages of P_0..P_k over CV p, integrated exactly with n points.
  averaging_ = SmallMatrix(n);
  std::vector<double> leg(static_cast<std::size_t>(n));
  for (int p = 0; p <= k; ++p) {
    const double mid = 0.5 * (cv_bounds_[p] + cv_bounds_[p + 1]);
    const double half = 0.5 * cv_widths_[p];
    for (int q = 0; q < n; ++q) {
      legendre_all(mid + half * gauss_.nodes[q], leg);
      for (int m = 0; m < n; ++m) averaging_(p, m) += 0.5 * gauss_.weights[q] * leg[m];
    }
  }
  recon_ = inverse(averaging_);
  recon_condition_ = averaging_.norm_inf() * recon_.norm_inf();

  modal_to_nodal_ = SmallMatrix(n);
  for (int g = 0; g < n; ++g) {
    legendre_all(gauss_.nodes[g], leg);
    for (int m = 0; m < n; ++m) modal_to_nodal_(g, m) = leg[m];
  }
  // Discrete Legendre transform, exact for degree <= k at n Gauss points.
  nodal_to_modal_ = SmallMatrix(n);
  for (int m = 0; m < n; ++m)
    for (int g = 0; g < n; ++g)
      nodal_to_modal_(m, g) = (2.0 * m + 1.0) / 2.0 * gauss_.weights[g] * modal_to_nodal_(g, m);

  avg_to_nodal_ = modal_to_nodal_ * recon_;
  nodal_to_avg_ = averaging_ * nodal_to_modal_;

  samples_ = cv_bounds_;
  samples_.insert(samples_.end(), gauss_.nodes.begin(), gauss_.nodes.end());
  std::sort(samples_.begin(), samples_.end());
}

const ReferenceElement& ReferenceElement::get(int k) {
  if (k < 1 || k > 6) {
    throw ConfigError("reference_element: degree k must be in [1, 6], got " + std::to_string(k));
  }
  static std::array<std::unique_ptr<ReferenceElement>, 7> cache;
  static std::once_flag flags[7];
  std::call_once(flags[k], [k] { cache[static_cast<std::size_t>(k)] = std::make_unique<ReferenceElement>(k); });
  return *cache[static_cast<std::size_t>(k)];
}

Grid1D::Grid1D(double lo, double hi, int n, Boundary bc) : x_lo(lo), x_hi(hi), n_cells(n), boundary(bc) {
  if (!(hi > lo) || n < 1) {
    throw ConfigError("Grid1D: need x_hi > x_lo and n_cells >= 1");
  }
}

double Grid1D::to_physical(int i, double s) const { return x_lo + (i + 0.5 * (s + 1.0)) * h(); }

CellCoord Grid1D::to_reference(double x) const {
  CellCoord c;
  double t = (x - x_lo) / h();
  if (boundary == Boundary::ZeroInflow) {
    if (t < 0.0 || t > n_cells) {
      c.inside = false;
      c.cell = t < 0.0 ? -1 : n_cells;
      return c;
    }
    c.cell = std::min(static_cast<int>(std::floor(t)), n_cells - 1);
    c.s = std::clamp(2.0 * (t - c.cell) - 1.0, -1.0, 1.0);
    return c;
  }
  const double w = std::floor(t / n_cells);
  t -= w * n_cells;
  int cell = static_cast<int>(std::floor(t));
  int wraps = static_cast<int>(w);
  if (cell >= n_cells) {
    cell -= n_cells;
    t -= n_cells;
    ++wraps;
  } else if (cell < 0) {
    cell += n_cells;
    t += n_cells;
    --wraps;
  }
  c.cell = cell;
  c.wraps = wraps;
  c.s = std::clamp(2.0 * (t - cell) - 1.0, -1.0, 1.0);
  return c;
}

LocalPoly reconstruct(std::span<const double> avgs, const ReferenceElement& elem, int cell) {
  if (static_cast<int>(avgs.size()) != elem.ndof()) {
    throw ContractError("reconstruct: expected k+1 averages");
  }
  LocalPoly poly;
  poly.cell = cell;
  poly.coeffs.resize(avgs.size());
  elem.recon_matrix().apply(avgs, poly.coeffs);
  return poly;
}

std::vector<double> cv_averages(const LocalPoly& poly, const ReferenceElement& elem) {
  if (poly.degree() > elem.degree()) throw ContractError("cv_averages: polynomial degree exceeds k");
  std::vector<double> padded(static_cast<std::size_t>(elem.ndof()), 0.0);
  std::copy(poly.coeffs.begin(), poly.coeffs.end(), padded.begin());
  std::vector<double> out(padded.size());
  elem.averaging().apply(padded, out);
  return out;
}

}  // namespace slsv
