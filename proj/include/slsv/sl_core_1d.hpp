#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slsv/mesh_basis.hpp"

namespace slsv {

/// Piecewise degree-k polynomial on a 1D grid, stored as k+1 CV averages per
/// spectral volume (row i = averages of u_h over the CVs of SV i).
class Field1D {
 public:
  Field1D(Grid1D grid, const ReferenceElement& elem);
  Field1D(Grid1D grid, const ReferenceElement& elem, std::vector<double> dof);

  /// CV averages of f, integrated with a 10-point rule per CV.
  static Field1D from_function(Grid1D grid, const ReferenceElement& elem,
                               const std::function<double(double)>& f);
  /// Field whose SV polynomials are the given modal coefficients.
  static Field1D from_modal(Grid1D grid, const ReferenceElement& elem, std::span<const double> modal);

  [[nodiscard]] const Grid1D& grid() const { return grid_; }
  [[nodiscard]] const ReferenceElement& elem() const { return *elem_; }
  [[nodiscard]] int ndof() const { return elem_->ndof(); }
  [[nodiscard]] int n_cells() const { return grid_.n_cells; }

  [[nodiscard]] std::span<const double> dof() const { return dof_; }
  [[nodiscard]] std::span<double> dof() { return dof_; }
  [[nodiscard]] std::span<const double> cell(int i) const;
  [[nodiscard]] std::span<double> cell(int i);

  [[nodiscard]] LocalPoly poly(int i) const;
  /// All SV polynomials in modal form, N*(k+1) values.
  [[nodiscard]] std::vector<double> modal() const;
  /// Point value; x is wrapped on periodic grids, zero outside ZeroInflow grids.
  [[nodiscard]] double eval(double x) const;
  [[nodiscard]] double mass() const;

 private:
  Grid1D grid_;
  const ReferenceElement* elem_;
  std::vector<double> dof_;
};

/// Advection coefficient a(x,t) for one 1D solve.
class VelocityField1D {
 public:
  enum class Kind { Constant, PerPointConstant, Analytic };
  using Evaluator = std::function<double(double x, double t)>;

  static VelocityField1D constant(double c);
  /// One frozen speed per traced node, N*(k+2) values laid out per SV.
  static VelocityField1D per_point(std::vector<double> values);
  /// Characteristics integrated with classical RK4 using `substeps` substeps.
  static VelocityField1D analytic(Evaluator a, int substeps = 4);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double constant_value() const { return c_; }
  [[nodiscard]] std::span<const double> point_values() const { return values_; }
  [[nodiscard]] const Evaluator& evaluator() const { return eval_; }
  [[nodiscard]] int substeps() const { return substeps_; }

 private:
  Kind kind_ = Kind::Constant;
  double c_ = 0.0;
  std::vector<double> values_;
  Evaluator eval_;
  int substeps_ = 4;
};

/// Feet of the k+2 CV boundary nodes of every SV at the old time level.
/// Coordinates are unwrapped and may lie outside the domain.
struct UpstreamFeet {
  int n_cells = 0;
  int nodes_per_cell = 0;  // k+2
  std::vector<double> x;

  [[nodiscard]] double at(int i, int p) const {
    return x[static_cast<std::size_t>(i) * nodes_per_cell + p];
  }
};

/// Traces every CV boundary node back from t_new to t_new - dt.
/// Throws SolverError naming the SV when feet lose monotonicity.
UpstreamFeet trace_feet(const VelocityField1D& a, const Grid1D& grid, const ReferenceElement& elem,
                        double t_new, double dt);

/// Cell containing x (after periodic wrap) and the number of domain
/// traversals. On ZeroInflow grids out-of-domain points come back with
/// inside == false.
CellCoord locate(double x, const Grid1D& grid);

/// Exact integral of u over [xl, xr].
double upstream_mass(const Field1D& u, double xl, double xr);

/// Same as upstream_mass, on modal coefficients (N*(k+1) values).
double integrate_modal(std::span<const double> modal, const Grid1D& grid, const ReferenceElement& elem,
                       double xl, double xr);

/// One conservative semi-Lagrangian update over dt, ending at t_new.
Field1D sl_step_1d(const Field1D& u, const VelocityField1D& a, double t_new, double dt);

/// Line kernel shared with the 2D sweeps: modal coefficients in, new CV
/// averages out. Constant speeds take the exact-shift path; other kinds trace
/// feet and integrate over the upstream intervals.
void advance_line(const Grid1D& grid, const ReferenceElement& elem, std::span<const double> modal,
                  const VelocityField1D& a, double t_new, double dt, std::span<double> out_avgs);

/// Reference path for constant speeds: feet tracing plus interval integration,
/// bypassing the shift matrices. Used to cross-check the fast path.
void advance_line_traced(const Grid1D& grid, const ReferenceElement& elem, std::span<const double> modal,
                         const VelocityField1D& a, double t_new, double dt, std::span<double> out_avgs);

}  // namespace slsv
