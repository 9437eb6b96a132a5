#pragma once

#include <span>
#include <vector>

namespace slsv {

/// Gauss-Legendre rule on [-1,1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] int npts() const { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule, 1 <= n <= 12. Nodes ascending and exactly
/// symmetric about zero.
QuadratureRule gauss_rule(int n);

/// Ascending roots of the degree-n Legendre polynomial (n >= 1).
std::vector<double> legendre_roots(int n);

/// P_m(s) by the three-term recurrence.
double legendre(int m, double s);

/// Writes P_0(s) .. P_{out.size()-1}(s) into out.
void legendre_all(double s, std::span<double> out);

/// Evaluates sum_m coeffs[m] * P_m(s).
double legendre_series(std::span<const double> coeffs, double s);

/// Row-major dense square matrix used for the small per-degree operators.
struct SmallMatrix {
  int n = 0;
  std::vector<double> a;

  SmallMatrix() = default;
  explicit SmallMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }

  /// out = A * in. in and out must not alias.
  void apply(std::span<const double> in, std::span<double> out) const;
  [[nodiscard]] double norm_inf() const;
};

SmallMatrix operator*(const SmallMatrix& lhs, const SmallMatrix& rhs);
SmallMatrix inverse(const SmallMatrix& m);

/// Geometry and transfer operators of the degree-k spectral volume on [-1,1].
///
/// The k+2 control-volume boundaries are -1, the k roots of P_k, and 1; the
/// k+1 solution nodes are the roots of P_{k+1}. Polynomials are carried as
/// modal Legendre coefficients. Instances are immutable; use get() for the
/// shared cached copy.
class ReferenceElement {
 public:
  explicit ReferenceElement(int k);

  static const ReferenceElement& get(int k);

  [[nodiscard]] int degree() const { return k_; }
  [[nodiscard]] int ndof() const { return k_ + 1; }

  [[nodiscard]] std::span<const double> cv_bounds() const { return cv_bounds_; }
  [[nodiscard]] std::span<const double> cv_widths() const { return cv_widths_; }
  [[nodiscard]] std::span<const double> gauss_nodes() const { return gauss_.nodes; }
  [[nodiscard]] std::span<const double> gauss_weights() const { return gauss_.weights; }
  [[nodiscard]] const QuadratureRule& gauss() const { return gauss_; }

  /// Modal coefficients -> CV averages.
  [[nodiscard]] const SmallMatrix& averaging() const { return averaging_; }
  /// CV averages -> modal coefficients (inverse of averaging()).
  [[nodiscard]] const SmallMatrix& recon_matrix() const { return recon_; }
  /// Modal coefficients -> values at the Gauss nodes.
  [[nodiscard]] const SmallMatrix& modal_to_nodal() const { return modal_to_nodal_; }
  /// Values at the Gauss nodes -> modal coefficients (Lagrange interpolation).
  [[nodiscard]] const SmallMatrix& nodal_to_modal() const { return nodal_to_modal_; }
  /// CV averages -> Gauss node values.
  [[nodiscard]] const SmallMatrix& avg_to_nodal() const { return avg_to_nodal_; }
  /// Gauss node values -> CV averages.
  [[nodiscard]] const SmallMatrix& nodal_to_avg() const { return nodal_to_avg_; }

  /// ||A||_inf * ||A^-1||_inf of the averaging map.
  [[nodiscard]] double recon_condition() const { return recon_condition_; }

  /// Union of Gauss nodes and CV boundaries, ascending. These are the points
  /// at which positivity is enforced.
  [[nodiscard]] std::span<const double> sample_points() const { return samples_; }

 private:
  int k_;
  std::vector<double> cv_bounds_;
  std::vector<double> cv_widths_;
  QuadratureRule gauss_;
  SmallMatrix averaging_;
  SmallMatrix recon_;
  SmallMatrix modal_to_nodal_;
  SmallMatrix nodal_to_modal_;
  SmallMatrix avg_to_nodal_;
  SmallMatrix nodal_to_avg_;
  std::vector<double> samples_;
  double recon_condition_ = 0.0;
};

enum class Boundary { Periodic, ZeroInflow };

/// Location of a physical point relative to a Grid1D.
struct CellCoord {
  int cell = 0;      // in [0, n_cells) after wrapping
  double s = 0.0;    // reference coordinate in [-1, 1]
  int wraps = 0;     // full-domain traversals (periodic only)
  bool inside = true;  // false: ZeroInflow grid and x outside the domain
};

/// Uniform 1D grid of n_cells spectral volumes.
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_cells = 1;
  Boundary boundary = Boundary::Periodic;

  Grid1D() = default;
  Grid1D(double lo, double hi, int n, Boundary bc = Boundary::Periodic);

  [[nodiscard]] double h() const { return (x_hi - x_lo) / n_cells; }
  [[nodiscard]] double length() const { return x_hi - x_lo; }
  [[nodiscard]] double cell_lo(int i) const { return x_lo + i * h(); }
  [[nodiscard]] double center(int i) const { return x_lo + (i + 0.5) * h(); }

  [[nodiscard]] double to_physical(int i, double s) const;
  [[nodiscard]] CellCoord to_reference(double x) const;

  bool operator==(const Grid1D&) const = default;
};

/// The polynomial u_h restricted to one cell, in modal Legendre form.
struct LocalPoly {
  int cell = 0;
  std::vector<double> coeffs;

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  [[nodiscard]] double operator()(double s) const { return legendre_series(coeffs, s); }
  [[nodiscard]] double mean() const { return coeffs.empty() ? 0.0 : coeffs[0]; }
};

LocalPoly reconstruct(std::span<const double> avgs, const ReferenceElement& elem, int cell = 0);
std::vector<double> cv_averages(const LocalPoly& poly, const ReferenceElement& elem);

}  // namespace slsv
