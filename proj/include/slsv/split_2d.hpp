#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slsv/limiters.hpp"
#include "slsv/mesh_basis.hpp"
#include "slsv/sl_core_1d.hpp"

namespace slsv {

enum class Direction { X, Y };

/// Piecewise Q^k field on an Nx x Ny tensor grid, stored as point values at
/// the tensor Gauss nodes (xi_g, eta_m) of every SV.
class Field2D {
 public:
  Field2D(Grid1D gx, Grid1D gy, const ReferenceElement& elem);

  /// Samples f at the tensor Gauss nodes.
  static Field2D from_function(Grid1D gx, Grid1D gy, const ReferenceElement& elem,
                               const std::function<double(double, double)>& f);

  [[nodiscard]] const Grid1D& grid_x() const { return gx_; }
  [[nodiscard]] const Grid1D& grid_y() const { return gy_; }
  [[nodiscard]] const ReferenceElement& elem() const { return *elem_; }
  [[nodiscard]] int ndof() const { return elem_->ndof(); }

  [[nodiscard]] std::size_t index(int i, int j, int g, int m) const {
    const std::size_t n = static_cast<std::size_t>(ndof());
    return ((static_cast<std::size_t>(i) * gy_.n_cells + j) * n + g) * n + m;
  }
  [[nodiscard]] double& at(int i, int j, int g, int m) { return vals_[index(i, j, g, m)]; }
  [[nodiscard]] double at(int i, int j, int g, int m) const { return vals_[index(i, j, g, m)]; }

  /// (k+1)^2 node values of SV (i, j), index g*(k+1)+m.
  [[nodiscard]] std::span<double> cell(int i, int j);
  [[nodiscard]] std::span<const double> cell(int i, int j) const;

  [[nodiscard]] std::span<const double> values() const { return vals_; }
  [[nodiscard]] std::span<double> values() { return vals_; }

  [[nodiscard]] double x_node(int i, int g) const { return gx_.to_physical(i, elem_->gauss_nodes()[g]); }
  [[nodiscard]] double y_node(int j, int m) const { return gy_.to_physical(j, elem_->gauss_nodes()[m]); }

  /// Point value of the Q^k interpolant (zero outside ZeroInflow directions).
  [[nodiscard]] double eval(double x, double y) const;
  /// Value of the cell polynomial at reference coordinates (s, r).
  [[nodiscard]] double eval_reference(int i, int j, double s, double r) const;
  /// Integral over the domain by tensor Gauss quadrature (exact for Q^k).
  [[nodiscard]] double mass() const;
  /// Average of the Q^k polynomial over SV (i, j).
  [[nodiscard]] double cell_mean(int i, int j) const;

 private:
  Grid1D gx_;
  Grid1D gy_;
  const ReferenceElement* elem_;
  std::vector<double> vals_;
};

/// 1D field along the Gauss line at transverse cell `cell`, node `node`.
Field1D extract_line(const Field2D& f, int cell, int node, Direction dir);

/// Writes the line's polynomials back at the Gauss nodes of that line.
void reassemble_line(Field2D& f, const Field1D& line, int cell, int node, Direction dir);

/// Advection coefficient for the line at transverse coordinate `coord`
/// (cell `cell`, Gauss node `node`).
using LineCoefficient = std::function<VelocityField1D(double coord, int cell, int node)>;

struct SweepPlan {
  Direction direction = Direction::X;
  double dt = 0.0;
  LineCoefficient coefficient;
  const LimiterConfig* limiters = nullptr;  // WENO runs per line when enabled
};

struct SweepStats {
  int limited_cells = 0;
};

/// Solves every Gauss line of the sweep direction with the 1D scheme and
/// stores the new line polynomials at the Gauss nodes. Lines run in parallel
/// and write disjoint slabs, so results do not depend on the thread count.
Field2D sweep(const Field2D& f, const SweepPlan& plan, double t_new, SweepStats* stats = nullptr);

/// In-place variant of sweep.
void sweep_inplace(Field2D& f, const SweepPlan& plan, double t_new, SweepStats* stats = nullptr);

/// Strang step: dt/2 in x, dt in y, dt/2 in x. Limiters (if given) run
/// line-by-line inside the sweeps (WENO) and once per cell at the end (PP).
Field2D strang_step(const Field2D& f, const LineCoefficient& a, const LineCoefficient& b, double t, double dt,
                    const LimiterConfig* limiters = nullptr);

/// PP limiter on every cell. Returns the number of cells with negative mean.
int pp_limit_field(Field2D& f, double* sampled_min = nullptr);

}  // namespace slsv
