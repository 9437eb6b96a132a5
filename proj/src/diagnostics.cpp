#include "slsv/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "slsv/errors.hpp"
#include "slsv/field_solver.hpp"

namespace slsv {

Functionals functionals(const Field2D& f, const Field1D* E, double entropy_floor) {
  const ReferenceElement& elem = f.elem();
  const int n = elem.ndof();
  const auto w = elem.gauss_weights();
  const int nx = f.grid_x().n_cells;
  const int nv = f.grid_y().n_cells;
  const double jac = 0.25 * f.grid_x().h() * f.grid_y().h();
  // Per-row partial sums, added in order afterwards: same bits for any thread count.
  std::vector<std::array<double, 4>> part(static_cast<std::size_t>(nx));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    double l1 = 0.0, l2 = 0.0, kin = 0.0, ent = 0.0;
    for (int j = 0; j < nv; ++j) {
      const auto c = f.cell(i, j);
      for (int g = 0; g < n; ++g)
        for (int m = 0; m < n; ++m) {
          const double ww = jac * w[g] * w[m];
          const double val = c[g * n + m];
          const double v = f.y_node(j, m);
          const double fl = std::max(val, entropy_floor);
          l1 += ww * std::abs(val);
          l2 += ww * val * val;
          kin += ww * v * v * val;
          ent -= ww * fl * std::log(fl);
        }
    }
    part[static_cast<std::size_t>(i)] = {l1, l2, kin, ent};
  }
  double l1 = 0.0, l2 = 0.0, kin = 0.0, ent = 0.0;
  for (const auto& p : part) {
    l1 += p[0];
    l2 += p[1];
    kin += p[2];
    ent += p[3];
  }
  Functionals out{l1, std::sqrt(l2), kin, ent};
  if (E) {
    const double el2 = efield_norms(*E).l2;
    out.energy += el2 * el2;
  }
  return out;
}

ENorms efield_norms(const Field1D& E) {
  const ReferenceElement& elem = E.elem();
  const int n = elem.ndof();
  const std::vector<double> modal = E.modal();
  double acc = 0.0;
  for (int i = 0; i < E.n_cells(); ++i)
    for (int m = 0; m < n; ++m) {
      const double c = modal[static_cast<std::size_t>(i) * n + m];
      acc += c * c * 2.0 / (2 * m + 1);
    }
  return {std::sqrt(0.5 * E.grid().h() * acc), max_abs_E(E)};
}

TimeSeriesRecord make_record(double t, const Functionals& fn, const ENorms& en, const TimeSeriesRecord* initial) {
  TimeSeriesRecord r{t, fn.l1, fn.l2, fn.energy, fn.entropy, en.l2, en.linf, 0.0, 0.0, 0.0, 0.0};
  if (initial) {
    auto dev = [](double now, double ref) { return ref != 0.0 ? (now - ref) / std::abs(ref) : 0.0; };
    r.rel_dev_l1 = dev(r.l1, initial->l1);
    r.rel_dev_l2 = dev(r.l2, initial->l2);
    r.rel_dev_energy = dev(r.energy, initial->energy);
    r.rel_dev_entropy = dev(r.entropy, initial->entropy);
  }
  return r;
}

std::vector<Peak> find_peaks(std::span<const double> t, std::span<const double> value, double min_separation,
                             bool include_initial) {
  if (t.size() != value.size()) throw ContractError("find_peaks: size mismatch");
  std::vector<Peak> peaks;
  std::vector<double> raw;
  if (include_initial && value.size() > 1 && value[0] > value[1] && value[0] > 0.0) {
    peaks.push_back({t[0], std::log(value[0])});
    raw.push_back(value[0]);
  }
  for (std::size_t i = 1; i + 1 < value.size(); ++i) {
    if (!(value[i] > value[i - 1] && value[i] > value[i + 1])) continue;
    if (!(value[i] > 0.0)) continue;
    const Peak p{t[i], std::log(value[i])};
    if (!peaks.empty() && p.t - peaks.back().t < min_separation) {
      if (value[i] > raw.back()) {
        peaks.back() = p;
        raw.back() = value[i];
      }
      continue;
    }
    peaks.push_back(p);
    raw.push_back(value[i]);
  }
  return peaks;
}

RateFit fit_rate(std::span<const double> t, std::span<const double> value, int peak_lo, int peak_hi, FitMode mode,
                 double min_separation, bool include_initial) {
  if (peak_lo < 1 || peak_hi <= peak_lo) throw ContractError("fit_rate: need 1 <= peak_lo < peak_hi");
  const std::vector<Peak> all = find_peaks(t, value, min_separation, include_initial);
  if (static_cast<int>(all.size()) < peak_hi) {
    std::ostringstream os;
    os << "fit_rate: requested peaks " << peak_lo << ".." << peak_hi << " but found " << all.size() << ":";
    for (const Peak& p : all) os << " (t=" << p.t << ", ln=" << p.log_value << ")";
    throw DiagnosticError(os.str());
  }
  RateFit fit;
  fit.peak_lo = peak_lo;
  fit.peak_hi = peak_hi;
  fit.peaks.assign(all.begin() + (peak_lo - 1), all.begin() + peak_hi);
  const auto& P = fit.peaks;
  double intercept = 0.0;
  if (mode == FitMode::Endpoints) {
    fit.gamma = (P.back().log_value - P.front().log_value) / (P.back().t - P.front().t);
    intercept = P.front().log_value - fit.gamma * P.front().t;
  } else {
    const double n = static_cast<double>(P.size());
    double st = 0.0, sy = 0.0;
    for (const Peak& p : P) {
      st += p.t;
      sy += p.log_value;
    }
    const double tm = st / n, ym = sy / n;
    double num = 0.0, den = 0.0;
    for (const Peak& p : P) {
      num += (p.t - tm) * (p.log_value - ym);
      den += (p.t - tm) * (p.t - tm);
    }
    fit.gamma = num / den;
    intercept = ym - fit.gamma * tm;
  }
  double rs = 0.0;
  for (const Peak& p : P) {
    const double d = p.log_value - (intercept + fit.gamma * p.t);
    rs += d * d;
  }
  fit.residual = std::sqrt(rs / static_cast<double>(P.size()));
  return fit;
}

ErrorNorms error_norms(const Field1D& u, const std::function<double(double)>& exact) {
  const ReferenceElement& elem = u.elem();
  const QuadratureRule q = gauss_rule(elem.degree() + 2);
  const std::vector<double> modal = u.modal();
  const int n = elem.ndof();
  const Grid1D& g = u.grid();
  double acc = 0.0, mx = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    const auto c = std::span<const double>(modal).subspan(static_cast<std::size_t>(i) * n, n);
    for (int p = 0; p < q.npts(); ++p) {
      const double e = legendre_series(c, q.nodes[p]) - exact(g.to_physical(i, q.nodes[p]));
      acc += 0.5 * g.h() * q.weights[p] * e * e;
      mx = std::max(mx, std::abs(e));
    }
  }
  return {std::sqrt(acc / g.length()), mx};
}

ErrorNorms error_norms(const Field2D& u, const std::function<double(double, double)>& exact, int extra_points) {
  const ReferenceElement& elem = u.elem();
  const int n = elem.ndof();
  const QuadratureRule q = gauss_rule(elem.degree() + 1 + extra_points);
  const int nq = q.npts();
  // Lagrange weights of the Gauss-node basis at the quadrature points.
  std::vector<double> L(static_cast<std::size_t>(nq) * n);
  for (int p = 0; p < nq; ++p)
    for (int g = 0; g < n; ++g) {
      double l = 1.0;
      for (int r = 0; r < n; ++r)
        if (r != g) l *= (q.nodes[p] - elem.gauss_nodes()[r]) / (elem.gauss_nodes()[g] - elem.gauss_nodes()[r]);
      L[static_cast<std::size_t>(p) * n + g] = l;
    }
  const Grid1D& gx = u.grid_x();
  const Grid1D& gy = u.grid_y();
  const double jac = 0.25 * gx.h() * gy.h();
  std::vector<double> part(static_cast<std::size_t>(gx.n_cells), 0.0);
  double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mx)
  for (int i = 0; i < gx.n_cells; ++i) {
    std::vector<double> tmp(static_cast<std::size_t>(nq) * n);
    double acc = 0.0;
    for (int j = 0; j < gy.n_cells; ++j) {
      const auto c = u.cell(i, j);
      for (int a = 0; a < nq; ++a)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int g = 0; g < n; ++g) s += L[static_cast<std::size_t>(a) * n + g] * c[g * n + m];
          tmp[static_cast<std::size_t>(a) * n + m] = s;
        }
      for (int a = 0; a < nq; ++a) {
        const double x = gx.to_physical(i, q.nodes[a]);
        for (int b = 0; b < nq; ++b) {
          double val = 0.0;
          for (int m = 0; m < n; ++m) val += tmp[static_cast<std::size_t>(a) * n + m] * L[static_cast<std::size_t>(b) * n + m];
          const double e = val - exact(x, gy.to_physical(j, q.nodes[b]));
          acc += jac * q.weights[a] * q.weights[b] * e * e;
          mx = std::max(mx, std::abs(e));
        }
      }
    }
    part[static_cast<std::size_t>(i)] = acc;
  }
  double acc = 0.0;
  for (double p : part) acc += p;
  return {std::sqrt(acc / (gx.length() * gy.length())), mx};
}

std::vector<ConvergenceRow> convergence_table(const std::vector<std::pair<int, ErrorNorms>>& runs) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    ConvergenceRow row{runs[r].first, runs[r].second.l2, std::nullopt, runs[r].second.linf, std::nullopt};
    if (r > 0) {
      const double ratio = std::log(static_cast<double>(runs[r].first) / runs[r - 1].first);
      if (ratio != 0.0) {
        row.l2_order = std::log(runs[r - 1].second.l2 / runs[r].second.l2) / ratio;
        row.linf_order = std::log(runs[r - 1].second.linf / runs[r].second.linf) / ratio;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace slsv
