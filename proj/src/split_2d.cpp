#include "slsv/split_2d.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <limits>
#include <string>

#include "slsv/errors.hpp"

namespace slsv {

Field2D::Field2D(Grid1D gx, Grid1D gy, const ReferenceElement& elem)
    : gx_(gx),
      gy_(gy),
      elem_(&elem),
      vals_(static_cast<std::size_t>(gx.n_cells) * gy.n_cells * elem.ndof() * elem.ndof(), 0.0) {}

Field2D Field2D::from_function(Grid1D gx, Grid1D gy, const ReferenceElement& elem,
                               const std::function<double(double, double)>& f) {
  Field2D out(gx, gy, elem);
  const int n = elem.ndof();
  for (int i = 0; i < gx.n_cells; ++i)
    for (int j = 0; j < gy.n_cells; ++j)
      for (int g = 0; g < n; ++g)
        for (int m = 0; m < n; ++m) out.at(i, j, g, m) = f(out.x_node(i, g), out.y_node(j, m));
  return out;
}

std::span<double> Field2D::cell(int i, int j) {
  const std::size_t nn = static_cast<std::size_t>(ndof()) * ndof();
  return std::span<double>(vals_).subspan(index(i, j, 0, 0), nn);
}

std::span<const double> Field2D::cell(int i, int j) const {
  const std::size_t nn = static_cast<std::size_t>(ndof()) * ndof();
  return std::span<const double>(vals_).subspan(index(i, j, 0, 0), nn);
}

double Field2D::eval_reference(int i, int j, double s, double r) const {
  const int n = ndof();
  const SmallMatrix& n2m = elem_->nodal_to_modal();
  double ls[8], lr[8];
  legendre_all(s, std::span<double>(ls, static_cast<std::size_t>(n)));
  legendre_all(r, std::span<double>(lr, static_cast<std::size_t>(n)));
  // Lagrange weights at s and r from the modal expansion of each nodal basis.
  double ws[8], wr[8];
  for (int g = 0; g < n; ++g) {
    double a = 0.0, b = 0.0;
    for (int m = 0; m < n; ++m) {
      a += ls[m] * n2m(m, g);
      b += lr[m] * n2m(m, g);
    }
    ws[g] = a;
    wr[g] = b;
  }
  const auto c = cell(i, j);
  double acc = 0.0;
  for (int g = 0; g < n; ++g)
    for (int m = 0; m < n; ++m) acc += ws[g] * wr[m] * c[g * n + m];
  return acc;
}

double Field2D::eval(double x, double y) const {
  const CellCoord cx = gx_.to_reference(x);
  const CellCoord cy = gy_.to_reference(y);
  if (!cx.inside || !cy.inside) return 0.0;
  return eval_reference(cx.cell, cy.cell, cx.s, cy.s);
}

double Field2D::cell_mean(int i, int j) const {
  const int n = ndof();
  const auto w = elem_->gauss_weights();
  const auto c = cell(i, j);
  double acc = 0.0;
  for (int g = 0; g < n; ++g)
    for (int m = 0; m < n; ++m) acc += w[g] * w[m] * c[g * n + m];
  return 0.25 * acc;
}

double Field2D::mass() const {
  double acc = 0.0;
  for (int i = 0; i < gx_.n_cells; ++i)
    for (int j = 0; j < gy_.n_cells; ++j) acc += cell_mean(i, j);
  return acc * gx_.h() * gy_.h();
}

namespace {

struct LineLayout {
  std::size_t offset;   // index of (cell 0, node 0) along the line
  std::size_t cell_stride;
  std::size_t node_stride;
  int n_cells;
};

LineLayout layout(const Field2D& f, int cell, int node, Direction dir) {
  const std::size_t n = static_cast<std::size_t>(f.ndof());
  if (dir == Direction::X) {
    return {f.index(0, cell, 0, node), static_cast<std::size_t>(f.grid_y().n_cells) * n * n, n,
            f.grid_x().n_cells};
  }
  return {f.index(cell, 0, node, 0), n * n, 1, f.grid_y().n_cells};
}

void gather_modal(std::span<const double> vals, const LineLayout& L, const ReferenceElement& elem,
                  std::span<double> modal) {
  const int n = elem.ndof();
  double nodal[8];
  for (int i = 0; i < L.n_cells; ++i) {
    const std::size_t base = L.offset + static_cast<std::size_t>(i) * L.cell_stride;
    for (int g = 0; g < n; ++g) nodal[g] = vals[base + static_cast<std::size_t>(g) * L.node_stride];
    elem.nodal_to_modal().apply(std::span<const double>(nodal, static_cast<std::size_t>(n)),
                                modal.subspan(static_cast<std::size_t>(i) * n, n));
  }
}

void scatter_nodal(std::span<double> vals, const LineLayout& L, const SmallMatrix& to_nodal,
                   std::span<const double> line, int n) {
  double nodal[8];
  for (int i = 0; i < L.n_cells; ++i) {
    to_nodal.apply(line.subspan(static_cast<std::size_t>(i) * n, n),
                   std::span<double>(nodal, static_cast<std::size_t>(n)));
    const std::size_t base = L.offset + static_cast<std::size_t>(i) * L.cell_stride;
    for (int g = 0; g < n; ++g) vals[base + static_cast<std::size_t>(g) * L.node_stride] = nodal[g];
  }
}

}  // namespace

Field1D extract_line(const Field2D& f, int cell, int node, Direction dir) {
  const Grid1D& g = dir == Direction::X ? f.grid_x() : f.grid_y();
  const LineLayout L = layout(f, cell, node, dir);
  std::vector<double> modal(static_cast<std::size_t>(g.n_cells) * f.ndof());
  gather_modal(f.values(), L, f.elem(), modal);
  return Field1D::from_modal(g, f.elem(), modal);
}

void reassemble_line(Field2D& f, const Field1D& line, int cell, int node, Direction dir) {
  const LineLayout L = layout(f, cell, node, dir);
  scatter_nodal(f.values(), L, f.elem().avg_to_nodal(), line.dof(), f.ndof());
}

void sweep_inplace(Field2D& f, const SweepPlan& plan, double t_new, SweepStats* stats) {
  if (!(plan.dt > 0.0)) throw ContractError("sweep: dt must be positive");
  if (!plan.coefficient) throw ContractError("sweep: missing line coefficient");
  const ReferenceElement& elem = f.elem();
  const int n = elem.ndof();
  const Direction dir = plan.direction;
  const Grid1D& along = dir == Direction::X ? f.grid_x() : f.grid_y();
  const Grid1D& across = dir == Direction::X ? f.grid_y() : f.grid_x();
  const int n_lines = across.n_cells * n;
  const bool weno = plan.limiters && plan.limiters->weno_enabled;

  std::exception_ptr failure;
  int failed_line = std::numeric_limits<int>::max();
  int limited = 0;
  auto vals = f.values();

#pragma omp parallel reduction(+ : limited)
  {
    std::vector<double> modal(static_cast<std::size_t>(along.n_cells) * n);
    std::vector<double> avgs(modal.size());
#pragma omp for schedule(static)
    for (int line = 0; line < n_lines; ++line) {
      const int cell = line / n;
      const int node = line % n;
      try {
        const LineLayout L = layout(f, cell, node, dir);
        gather_modal(vals, L, elem, modal);
        const double coord = across.to_physical(cell, elem.gauss_nodes()[node]);
        const VelocityField1D a = plan.coefficient(coord, cell, node);
        advance_line(along, elem, modal, a, t_new, plan.dt, avgs);
        if (weno) {
          for (int i = 0; i < along.n_cells; ++i) {
            elem.recon_matrix().apply(std::span<const double>(avgs).subspan(static_cast<std::size_t>(i) * n, n),
                                      std::span<double>(modal).subspan(static_cast<std::size_t>(i) * n, n));
          }
          limited += weno_limit_modal(along, elem, modal, *plan.limiters);
          scatter_nodal(vals, L, elem.modal_to_nodal(), modal, n);
        } else {
          scatter_nodal(vals, L, elem.avg_to_nodal(), avgs, n);
        }
      } catch (...) {
#pragma omp critical(slsv_sweep_failure)
        {
          if (line < failed_line) {
            failed_line = line;
            failure = std::current_exception();
          }
        }
      }
    }
  }

  if (failure) {
    const char* name = dir == Direction::X ? "x" : "y";
    try {
      std::rethrow_exception(failure);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " [line " + std::to_string(failed_line) + ", " + name + "-sweep]");
    }
  }
  if (stats) stats->limited_cells += limited;
}

Field2D sweep(const Field2D& f, const SweepPlan& plan, double t_new, SweepStats* stats) {
  Field2D out = f;
  sweep_inplace(out, plan, t_new, stats);
  return out;
}

int pp_limit_field(Field2D& f, double* sampled_min) {
  const ReferenceElement& elem = f.elem();
  const SampleInterpolator interp(elem);
  int failures = 0;
  double mn = std::numeric_limits<double>::infinity();
  const int nx = f.grid_x().n_cells;
  const int ny = f.grid_y().n_cells;
#pragma omp parallel for schedule(static) reduction(+ : failures) reduction(min : mn)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double after = 0.0;
      if (!pp_limit_tensor_cell(f.cell(i, j), elem, interp, &after)) ++failures;
      mn = std::min(mn, after);
    }
  }
  if (sampled_min) *sampled_min = mn;
  return failures;
}

Field2D strang_step(const Field2D& f, const LineCoefficient& a, const LineCoefficient& b, double t, double dt,
                    const LimiterConfig* limiters) {
  Field2D out = f;
  sweep_inplace(out, SweepPlan{Direction::X, 0.5 * dt, a, limiters}, t + 0.5 * dt);
  sweep_inplace(out, SweepPlan{Direction::Y, dt, b, limiters}, t + dt);
  sweep_inplace(out, SweepPlan{Direction::X, 0.5 * dt, a, limiters}, t + dt);
  if (limiters && limiters->pp_enabled) pp_limit_field(out);
  return out;
}

}  // namespace slsv
