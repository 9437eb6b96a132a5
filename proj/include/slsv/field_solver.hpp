#pragma once

#include <memory>

#include "slsv/sl_core_1d.hpp"
#include "slsv/split_2d.hpp"

namespace slsv {

struct DensityField {
  Field1D rho;
  double rho0 = 0.0;
};

struct EFieldState {
  Field1D E;
  double max_abs = 0.0;
  double potential_mean = 0.0;
};

/// rho(x) = int f dv at every x-Gauss node; rho0 is the domain average of rho.
DensityField density_moment(const Field2D& f);

/// Max |E| over the Gauss nodes, CV boundaries and both sides of every interface.
double max_abs_E(const Field1D& E);

/// LDG solve of E_x = rho - rho0 on a periodic grid in mixed form
/// q = phi_x, q_x = rho - rho0 with phi-hat = phi^-, q-hat = q^+ and
/// mean(phi) = 0 enforced by a multiplier. E = q.
class LdgSolver {
 public:
  LdgSolver(Grid1D grid, const ReferenceElement& elem);
  ~LdgSolver();
  LdgSolver(const LdgSolver&) = delete;
  LdgSolver& operator=(const LdgSolver&) = delete;

  [[nodiscard]] EFieldState solve(const DensityField& d) const;
  /// Relative residual of the last solve.
  [[nodiscard]] double last_residual() const { return residual_; }

  [[nodiscard]] const Grid1D& grid() const { return grid_; }
  [[nodiscard]] const ReferenceElement& elem() const { return *elem_; }

 private:
  struct Impl;
  Grid1D grid_;
  const ReferenceElement* elem_;
  std::unique_ptr<Impl> impl_;
  mutable double residual_ = 0.0;
};

/// Uses a factorization cached per (grid, k).
EFieldState ldg_solve(const DensityField& d);

/// Exact zero-mean antiderivative of rho - rho0, projected per cell onto
/// degree k by matching moments against P^{k-1} and the left-end value.
EFieldState direct_solve(const DensityField& d);

}  // namespace slsv
