#include "slsv/field_solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "slsv/errors.hpp"

namespace slsv {

DensityField density_moment(const Field2D& f) {
  const ReferenceElement& elem = f.elem();
  const int n = elem.ndof();
  const int nx = f.grid_x().n_cells;
  const int nv = f.grid_y().n_cells;
  const double half_hv = 0.5 * f.grid_y().h();
  const auto w = elem.gauss_weights();
  std::vector<double> avgs(static_cast<std::size_t>(nx) * n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    double nodal[8] = {};
    for (int j = 0; j < nv; ++j) {
      const auto c = f.cell(i, j);
      for (int g = 0; g < n; ++g) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += w[m] * c[g * n + m];
        nodal[g] += half_hv * acc;
      }
    }
    elem.nodal_to_avg().apply(std::span<const double>(nodal, static_cast<std::size_t>(n)),
                              std::span<double>(avgs).subspan(static_cast<std::size_t>(i) * n, n));
  }
  DensityField d{Field1D(f.grid_x(), elem, std::move(avgs)), 0.0};
  d.rho0 = d.rho.mass() / f.grid_x().length();
  return d;
}

double max_abs_E(const Field1D& E) {
  const ReferenceElement& elem = E.elem();
  const std::vector<double> modal = E.modal();
  const int n = elem.ndof();
  double mx = 0.0;
  for (int i = 0; i < E.n_cells(); ++i) {
    const auto c = std::span<const double>(modal).subspan(static_cast<std::size_t>(i) * n, n);
    for (double s : elem.sample_points()) mx = std::max(mx, std::abs(legendre_series(c, s)));
  }
  return mx;
}

namespace {

void check_density(const DensityField& d) {
  if (d.rho.grid().boundary != Boundary::Periodic) throw ContractError("field solve needs a periodic x-grid");
  const double net = d.rho.mass() - d.rho0 * d.rho.grid().length();
  const double scale = std::max(1.0, std::abs(d.rho0) * d.rho.grid().length());
  if (std::abs(net) > 1e-10 * scale) {
    throw ContractError("field solve: int (rho - rho0) dx = " + std::to_string(net) + " is not zero");
  }
}

// Modal coefficients of rho - rho0, N*(k+1) values.
std::vector<double> source_modal(const DensityField& d) {
  std::vector<double> g = d.rho.modal();
  const int n = d.rho.ndof();
  for (int i = 0; i < d.rho.n_cells(); ++i) g[static_cast<std::size_t>(i) * n] -= d.rho0;
  return g;
}

EFieldState finish(const Grid1D& grid, const ReferenceElement& elem, std::vector<double> modal) {
  const int n = elem.ndof();
  double mean = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) mean += modal[static_cast<std::size_t>(i) * n];
  mean /= grid.n_cells;
  for (int i = 0; i < grid.n_cells; ++i) modal[static_cast<std::size_t>(i) * n] -= mean;
  EFieldState st{Field1D::from_modal(grid, elem, modal), 0.0, 0.0};
  st.max_abs = max_abs_E(st.E);
  return st;
}

}  // namespace

struct LdgSolver::Impl {
  Eigen::SparseMatrix<double> A;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

LdgSolver::LdgSolver(Grid1D grid, const ReferenceElement& elem)
    : grid_(grid), elem_(&elem), impl_(std::make_unique<Impl>()) {
  if (grid.boundary != Boundary::Periodic) throw ContractError("LdgSolver needs a periodic grid");
  const int N = grid.n_cells;
  const int n = elem.ndof();
  const double h = grid.h();
  const int nphi = N * n;
  const int dim = 2 * nphi + 1;
  auto phi = [&](int i, int m) { return ((i + N) % N) * n + m; };
  auto q = [&](int i, int m) { return nphi + ((i + N) % N) * n + m; };
  auto D = [](int l, int m) { return (m < l && (l - m) % 2 == 1) ? 2.0 : 0.0; };  // int P_m P_l'
  auto sgn = [](int m) { return m % 2 == 0 ? 1.0 : -1.0; };

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(N) * n * (5 * n + 2) + N);
  for (int i = 0; i < N; ++i) {
    for (int l = 0; l < n; ++l) {
      const int r = phi(i, l);
      t.emplace_back(r, q(i, l), h / (2 * l + 1));
      for (int m = 0; m < n; ++m) {
        if (D(l, m) != 0.0) t.emplace_back(r, phi(i, m), D(l, m));
        t.emplace_back(r, phi(i, m), -1.0);
        t.emplace_back(r, phi(i - 1, m), sgn(l));
      }
      const int s = q(i, l);
      for (int m = 0; m < n; ++m) {
        if (D(l, m) != 0.0) t.emplace_back(s, q(i, m), -D(l, m));
        t.emplace_back(s, q(i + 1, m), sgn(m));
        t.emplace_back(s, q(i, m), -sgn(l) * sgn(m));
      }
      if (l == 0) t.emplace_back(s, 2 * nphi, 1.0);
    }
    t.emplace_back(2 * nphi, phi(i, 0), h);
  }
  impl_->A.resize(dim, dim);
  impl_->A.setFromTriplets(t.begin(), t.end());
  impl_->A.makeCompressed();
  impl_->lu.analyzePattern(impl_->A);
  impl_->lu.factorize(impl_->A);
  if (impl_->lu.info() != Eigen::Success) throw SolverError("LDG assembly is singular");
}

LdgSolver::~LdgSolver() = default;

EFieldState LdgSolver::solve(const DensityField& d) const {
  if (!(d.rho.grid() == grid_) || d.rho.ndof() != elem_->ndof()) throw ContractError("LdgSolver: grid mismatch");
  check_density(d);
  const int N = grid_.n_cells;
  const int n = elem_->ndof();
  const int nphi = N * n;
  const double h = grid_.h();
  const std::vector<double> g = source_modal(d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * nphi + 1);
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < n; ++l) b[nphi + i * n + l] = h / (2 * l + 1) * g[static_cast<std::size_t>(i) * n + l];
  const Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("LDG solve failed");
  const double bn = b.lpNorm<Eigen::Infinity>();
  residual_ = bn > 0.0 ? (impl_->A * x - b).lpNorm<Eigen::Infinity>() / bn : (impl_->A * x).lpNorm<Eigen::Infinity>();
  if (residual_ > 1e-8) throw SolverError("LDG residual " + std::to_string(residual_) + " too large");
  std::vector<double> modal(x.data() + nphi, x.data() + 2 * nphi);
  return finish(grid_, *elem_, std::move(modal));
}

EFieldState ldg_solve(const DensityField& d) {
  using Key = std::tuple<double, double, int, int>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<LdgSolver>> cache;
  const Grid1D& g = d.rho.grid();
  const Key key{g.x_lo, g.x_hi, g.n_cells, d.rho.elem().degree()};
  std::shared_ptr<LdgSolver> solver;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) {
      if (g.boundary != Boundary::Periodic) throw ContractError("field solve needs a periodic x-grid");
      it = cache.emplace(key, std::make_shared<LdgSolver>(g, d.rho.elem())).first;
    }
    solver = it->second;
  }
  return solver->solve(d);
}

EFieldState direct_solve(const DensityField& d) {
  check_density(d);
  const Grid1D& grid = d.rho.grid();
  const ReferenceElement& elem = d.rho.elem();
  const int N = grid.n_cells;
  const int n = elem.ndof();
  const int k = elem.degree();
  const double half_h = 0.5 * grid.h();
  const std::vector<double> g = source_modal(d);

  // Antiderivative per cell in Legendre form, degree k+1:
  // int_{-1}^{s} P_0 = P_0 + P_1, int_{-1}^{s} P_m = (P_{m+1} - P_{m-1}) / (2m+1).
  std::vector<double> G(static_cast<std::size_t>(N) * (n + 1), 0.0);
  double left = 0.0;
  double total_mean = 0.0;
  for (int i = 0; i < N; ++i) {
    double* c = &G[static_cast<std::size_t>(i) * (n + 1)];
    const double* gi = &g[static_cast<std::size_t>(i) * n];
    c[0] += left + half_h * gi[0];
    c[1] += half_h * gi[0];
    for (int m = 1; m < n; ++m) {
      c[m + 1] += half_h * gi[m] / (2 * m + 1);
      c[m - 1] -= half_h * gi[m] / (2 * m + 1);
    }
    left = legendre_series(std::span<const double>(c, static_cast<std::size_t>(n + 1)), 1.0);
    total_mean += c[0];
  }
  total_mean /= N;

  std::vector<double> modal(static_cast<std::size_t>(N) * n);
  for (int i = 0; i < N; ++i) {
    double* c = &G[static_cast<std::size_t>(i) * (n + 1)];
    c[0] -= total_mean;
    const double left_value = legendre_series(std::span<const double>(c, static_cast<std::size_t>(n + 1)), -1.0);
    double* out = &modal[static_cast<std::size_t>(i) * n];
    double partial = 0.0;
    for (int m = 0; m < k; ++m) {
      out[m] = c[m];
      partial += c[m] * (m % 2 == 0 ? 1.0 : -1.0);
    }
    out[k] = (left_value - partial) * (k % 2 == 0 ? 1.0 : -1.0);
  }
  return finish(grid, elem, std::move(modal));
}

}  // namespace slsv
