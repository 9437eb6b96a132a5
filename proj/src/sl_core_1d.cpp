#include "slsv/sl_core_1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slsv/errors.hpp"

namespace slsv {

Field1D::Field1D(Grid1D grid, const ReferenceElement& elem)
    : grid_(grid), elem_(&elem), dof_(static_cast<std::size_t>(grid.n_cells) * elem.ndof(), 0.0) {}

Field1D::Field1D(Grid1D grid, const ReferenceElement& elem, std::vector<double> dof)
    : grid_(grid), elem_(&elem), dof_(std::move(dof)) {
  if (dof_.size() != static_cast<std::size_t>(grid.n_cells) * elem.ndof()) {
    throw ContractError("Field1D: dof size must be N*(k+1)");
  }
}

Field1D Field1D::from_function(Grid1D grid, const ReferenceElement& elem,
                               const std::function<double(double)>& f) {
  Field1D out(grid, elem);
  const QuadratureRule q = gauss_rule(10);
  const auto bounds = elem.cv_bounds();
  for (int i = 0; i < grid.n_cells; ++i) {
    auto row = out.cell(i);
    for (int p = 0; p < elem.ndof(); ++p) {
      const double mid = 0.5 * (bounds[p] + bounds[p + 1]);
      const double half = 0.5 * (bounds[p + 1] - bounds[p]);
      double acc = 0.0;
      for (int g = 0; g < q.npts(); ++g) acc += q.weights[g] * f(grid.to_physical(i, mid + half * q.nodes[g]));
      row[p] = 0.5 * acc;
    }
  }
  return out;
}

Field1D Field1D::from_modal(Grid1D grid, const ReferenceElement& elem, std::span<const double> modal) {
  Field1D out(grid, elem);
  const int n = elem.ndof();
  for (int i = 0; i < grid.n_cells; ++i) {
    elem.averaging().apply(modal.subspan(static_cast<std::size_t>(i) * n, n), out.cell(i));
  }
  return out;
}

std::span<const double> Field1D::cell(int i) const {
  return std::span<const double>(dof_).subspan(static_cast<std::size_t>(i) * ndof(), ndof());
}

std::span<double> Field1D::cell(int i) {
  return std::span<double>(dof_).subspan(static_cast<std::size_t>(i) * ndof(), ndof());
}

LocalPoly Field1D::poly(int i) const { return reconstruct(cell(i), *elem_, i); }

std::vector<double> Field1D::modal() const {
  std::vector<double> out(dof_.size());
  const int n = ndof();
  for (int i = 0; i < grid_.n_cells; ++i) {
    elem_->recon_matrix().apply(cell(i), std::span<double>(out).subspan(static_cast<std::size_t>(i) * n, n));
  }
  return out;
}

double Field1D::eval(double x) const {
  const CellCoord c = grid_.to_reference(x);
  if (!c.inside) return 0.0;
  return poly(c.cell)(c.s);
}

double Field1D::mass() const {
  const auto widths = elem_->cv_widths();
  const double half_h = 0.5 * grid_.h();
  double m = 0.0;
  for (int i = 0; i < grid_.n_cells; ++i) {
    const auto row = cell(i);
    for (int p = 0; p < ndof(); ++p) m += row[p] * widths[p] * half_h;
  }
  return m;
}

VelocityField1D VelocityField1D::constant(double c) {
  VelocityField1D v;
  v.kind_ = Kind::Constant;
  v.c_ = c;
  return v;
}

VelocityField1D VelocityField1D::per_point(std::vector<double> values) {
  VelocityField1D v;
  v.kind_ = Kind::PerPointConstant;
  v.values_ = std::move(values);
  return v;
}

VelocityField1D VelocityField1D::analytic(Evaluator a, int substeps) {
  if (substeps < 1) throw ConfigError("VelocityField1D: substeps must be >= 1");
  VelocityField1D v;
  v.kind_ = Kind::Analytic;
  v.eval_ = std::move(a);
  v.substeps_ = substeps;
  return v;
}

namespace {

double rk4_backward(const VelocityField1D::Evaluator& a, double x, double t_new, double dt, int substeps) {
  const double tau = -dt / substeps;
  double t = t_new;
  for (int s = 0; s < substeps; ++s) {
    const double k1 = a(x, t);
    const double k2 = a(x + 0.5 * tau * k1, t + 0.5 * tau);
    const double k3 = a(x + 0.5 * tau * k2, t + 0.5 * tau);
    const double k4 = a(x + tau * k3, t + tau);
    x += tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += tau;
  }
  return x;
}

// (h/2) * integral of the modal polynomial over [sa, sb] in reference units.
double partial_integral(std::span<const double> coeffs, const QuadratureRule& q, double sa, double sb) {
  const double mid = 0.5 * (sa + sb);
  const double half = 0.5 * (sb - sa);
  double acc = 0.0;
  for (int g = 0; g < q.npts(); ++g) acc += q.weights[g] * legendre_series(coeffs, mid + half * q.nodes[g]);
  return half * acc;
}

// Integral over [a, b] given in cell units (x = x_lo + a*h), a < b.
double integrate_cell_units(std::span<const double> modal, const Grid1D& grid, const ReferenceElement& elem,
                            double a, double b) {
  const int n = elem.ndof();
  const int N = grid.n_cells;
  const QuadratureRule& q = elem.gauss();
  double total = 0.0;
  long j = static_cast<long>(std::floor(a));
  for (; static_cast<double>(j) < b; ++j) {
    const double lo = std::max(a, static_cast<double>(j));
    const double hi = std::min(b, static_cast<double>(j + 1));
    if (hi <= lo) continue;
    long cell = j;
    if (grid.boundary == Boundary::Periodic) {
      cell = ((j % N) + N) % N;
    } else if (j < 0 || j >= N) {
      continue;
    }
    const auto coeffs = modal.subspan(static_cast<std::size_t>(cell) * n, n);
    const double sa = 2.0 * (lo - static_cast<double>(j)) - 1.0;
    const double sb = 2.0 * (hi - static_cast<double>(j)) - 1.0;
    if (sa == -1.0 && sb == 1.0) {
      total += 2.0 * coeffs[0];
    } else {
      total += partial_integral(coeffs, q, sa, sb);
    }
  }
  return 0.5 * grid.h() * total;
}

void check_interval(const Grid1D& grid, double xl, double xr) {
  if (!(xl < xr)) throw ContractError("upstream_mass: requires xl < xr");
  if (xr - xl > grid.length() * (1.0 + 1e-12)) {
    throw ContractError("upstream_mass: interval longer than the domain");
  }
}

}  // namespace

UpstreamFeet trace_feet(const VelocityField1D& a, const Grid1D& grid, const ReferenceElement& elem,
                        double t_new, double dt) {
  if (!(dt > 0.0)) throw ContractError("trace_feet: dt must be positive");
  const int np = elem.degree() + 2;
  UpstreamFeet feet;
  feet.n_cells = grid.n_cells;
  feet.nodes_per_cell = np;
  feet.x.resize(static_cast<std::size_t>(grid.n_cells) * np);
  const auto bounds = elem.cv_bounds();

  if (a.kind() == VelocityField1D::Kind::PerPointConstant &&
      a.point_values().size() != feet.x.size()) {
    throw ContractError("trace_feet: per-point speeds must have N*(k+2) entries");
  }

  for (int i = 0; i < grid.n_cells; ++i) {
    for (int p = 0; p < np; ++p) {
      const double x = grid.to_physical(i, bounds[p]);
      const std::size_t idx = static_cast<std::size_t>(i) * np + p;
      double foot = x;
      switch (a.kind()) {
        case VelocityField1D::Kind::Constant:
          foot = x - a.constant_value() * dt;
          break;
        case VelocityField1D::Kind::PerPointConstant:
          foot = x - a.point_values()[idx] * dt;
          break;
        case VelocityField1D::Kind::Analytic:
          foot = rk4_backward(a.evaluator(), x, t_new, dt, a.substeps());
          break;
      }
      if (!std::isfinite(foot)) {
        throw SolverError("trace_feet: non-finite foot in SV " + std::to_string(i));
      }
      feet.x[idx] = foot;
    }
    for (int p = 0; p + 1 < np; ++p) {
      if (!(feet.at(i, p) < feet.at(i, p + 1))) {
        throw SolverError("trace_feet: characteristics cross in SV " + std::to_string(i));
      }
    }
  }
  return feet;
}

CellCoord locate(double x, const Grid1D& grid) { return grid.to_reference(x); }

double integrate_modal(std::span<const double> modal, const Grid1D& grid, const ReferenceElement& elem,
                       double xl, double xr) {
  check_interval(grid, xl, xr);
  const double h = grid.h();
  if (xr - xl < 1e-15 * h) return 0.0;
  return integrate_cell_units(modal, grid, elem, (xl - grid.x_lo) / h, (xr - grid.x_lo) / h);
}

double upstream_mass(const Field1D& u, double xl, double xr) {
  const std::vector<double> modal = u.modal();
  return integrate_modal(modal, u.grid(), u.elem(), xl, xr);
}

namespace {

// Averaging operators for a rigid shift of phi cell widths, phi in [0, 1).
// new_avg(i) = left * modal(i - n - 1) + right * modal(i - n).
struct ShiftMatrices {
  SmallMatrix left;
  SmallMatrix right;
};

ShiftMatrices shift_matrices(const ReferenceElement& elem, double phi) {
  const int n = elem.ndof();
  const QuadratureRule& q = elem.gauss();
  const auto bounds = elem.cv_bounds();
  const auto widths = elem.cv_widths();
  ShiftMatrices m{SmallMatrix(n), SmallMatrix(n)};
  std::vector<double> leg(static_cast<std::size_t>(n));

  auto accumulate = [&](SmallMatrix& target, int p, double sa, double sb) {
    if (!(sb > sa)) return;
    const double mid = 0.5 * (sa + sb);
    const double half = 0.5 * (sb - sa);
    for (int g = 0; g < q.npts(); ++g) {
      legendre_all(mid + half * q.nodes[g], leg);
      for (int j = 0; j < n; ++j) target(p, j) += half * q.weights[g] * leg[j] / widths[p];
    }
  };

  for (int p = 0; p < n; ++p) {
    // Upstream CV in cell units of the right cell: [sigma_p - phi, sigma_{p+1} - phi].
    const double a = 0.5 * (bounds[p] + 1.0) - phi;
    const double b = 0.5 * (bounds[p + 1] + 1.0) - phi;
    if (a < 0.0) accumulate(m.left, p, 2.0 * (a + 1.0) - 1.0, 2.0 * (std::min(b, 0.0) + 1.0) - 1.0);
    if (b > 0.0) accumulate(m.right, p, 2.0 * std::max(a, 0.0) - 1.0, 2.0 * b - 1.0);
  }
  return m;
}

void advance_constant(const Grid1D& grid, const ReferenceElement& elem, std::span<const double> modal,
                      double speed, double dt, std::span<double> out) {
  const int n = elem.ndof();
  const int N = grid.n_cells;
  const double shift = speed * dt / grid.h();
  const double whole = std::floor(shift);
  double phi = shift - whole;
  long ns = static_cast<long>(whole);
  if (phi >= 1.0) {
    phi = 0.0;
    ++ns;
  }
  const ShiftMatrices m = shift_matrices(elem, phi);
  const bool periodic = grid.boundary == Boundary::Periodic;
  const long nwrap = periodic ? ((ns % N) + N) % N : ns;

  std::vector<double> tmp(static_cast<std::size_t>(n));
  for (int i = 0; i < N; ++i) {
    auto dst = out.subspan(static_cast<std::size_t>(i) * n, n);
    std::fill(dst.begin(), dst.end(), 0.0);
    long jr = i - nwrap;
    long jl = jr - 1;
    if (periodic) {
      jr = ((jr % N) + N) % N;
      jl = ((jl % N) + N) % N;
    }
    if (jl >= 0 && jl < N) {
      m.left.apply(modal.subspan(static_cast<std::size_t>(jl) * n, n), tmp);
      for (int p = 0; p < n; ++p) dst[p] += tmp[p];
    }
    if (jr >= 0 && jr < N) {
      m.right.apply(modal.subspan(static_cast<std::size_t>(jr) * n, n), tmp);
      for (int p = 0; p < n; ++p) dst[p] += tmp[p];
    }
  }
}

}  // namespace

void advance_line_traced(const Grid1D& grid, const ReferenceElement& elem, std::span<const double> modal,
                         const VelocityField1D& a, double t_new, double dt, std::span<double> out) {
  const UpstreamFeet feet = trace_feet(a, grid, elem, t_new, dt);
  const int n = elem.ndof();
  const double h = grid.h();
  const auto bounds = elem.cv_bounds();
  for (int i = 0; i < grid.n_cells; ++i)
    for (int p = 0; p <= n; ++p) {
      if (std::abs(feet.at(i, p) - grid.to_physical(i, bounds[p])) > grid.length() * (1.0 + 1e-12)) {
        throw ContractError("sl_step: displacement exceeds the domain length in SV " + std::to_string(i));
      }
    }
  const double half_h = 0.5 * h;
  const auto widths = elem.cv_widths();
  for (int i = 0; i < grid.n_cells; ++i) {
    for (int p = 0; p < n; ++p) {
      const double xl = feet.at(i, p);
      const double xr = feet.at(i, p + 1);
      if (xr - xl > grid.length() * (1.0 + 1e-12)) {
        throw SolverError("sl_step: upstream CV longer than the domain in SV " + std::to_string(i));
      }
      double m = 0.0;
      if (xr - xl >= 1e-15 * h) {
        m = integrate_cell_units(modal, grid, elem, (xl - grid.x_lo) / h, (xr - grid.x_lo) / h);
      }
      out[static_cast<std::size_t>(i) * n + p] = m / (widths[p] * half_h);
    }
  }
}

void advance_line(const Grid1D& grid, const ReferenceElement& elem, std::span<const double> modal,
                  const VelocityField1D& a, double t_new, double dt, std::span<double> out) {
  if (!(dt > 0.0)) throw ContractError("sl_step: dt must be positive");
  if (a.kind() == VelocityField1D::Kind::Constant) {
    if (!std::isfinite(a.constant_value())) throw SolverError("sl_step: non-finite advection speed");
    if (std::abs(a.constant_value()) * dt > grid.length() * (1.0 + 1e-12)) {
      throw ContractError("sl_step: displacement |a| dt exceeds the domain length");
    }
    advance_constant(grid, elem, modal, a.constant_value(), dt, out);
    return;
  }
  advance_line_traced(grid, elem, modal, a, t_new, dt, out);
}

Field1D sl_step_1d(const Field1D& u, const VelocityField1D& a, double t_new, double dt) {
  const std::vector<double> modal = u.modal();
  Field1D out(u.grid(), u.elem());
  advance_line(u.grid(), u.elem(), modal, a, t_new, dt, out.dof());
  return out;
}

}  // namespace slsv
