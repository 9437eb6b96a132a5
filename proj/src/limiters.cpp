#include "slsv/limiters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slsv/errors.hpp"

namespace slsv {

void LimiterConfig::validate() const {
  if (tvb_M < 0.0) throw ConfigError("limiters: tvb_M must be >= 0");
  if (!(weno_eps > 0.0)) throw ConfigError("limiters: weno_eps must be > 0");
  if (weno_power < 1) throw ConfigError("limiters: weno_power must be >= 1");
  double sum = 0.0;
  for (double w : linear_weights) {
    if (!(w > 0.0)) throw ConfigError("limiters: linear weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("limiters: linear weights must sum to 1");
}

double pp_theta(double mean, double sampled_min) {
  if (mean < 0.0) return 0.0;
  if (sampled_min >= 0.0 || sampled_min >= mean) return 1.0;
  return std::min(std::abs(mean / (sampled_min - mean)), 1.0);
}

PPResult pp_limit(const LocalPoly& poly, std::span<const double> samples) {
  PPResult out{poly, 1.0, false};
  const double mean = poly.mean();
  if (mean < 0.0) {
    out.failed = true;
    return out;
  }
  double mn = std::numeric_limits<double>::infinity();
  for (double s : samples) mn = std::min(mn, poly(s));
  out.theta = pp_theta(mean, mn);
  if (out.theta < 1.0) {
    for (std::size_t m = 1; m < out.poly.coeffs.size(); ++m) out.poly.coeffs[m] *= out.theta;
  }
  return out;
}

SampleInterpolator::SampleInterpolator(const ReferenceElement& elem)
    : n_samples(static_cast<int>(elem.sample_points().size())), ndof(elem.ndof()) {
  matrix.assign(static_cast<std::size_t>(n_samples) * ndof, 0.0);
  std::vector<double> leg(static_cast<std::size_t>(ndof));
  const SmallMatrix& n2m = elem.nodal_to_modal();
  for (int r = 0; r < n_samples; ++r) {
    legendre_all(elem.sample_points()[r], leg);
    for (int g = 0; g < ndof; ++g) {
      double acc = 0.0;
      for (int m = 0; m < ndof; ++m) acc += leg[m] * n2m(m, g);
      matrix[static_cast<std::size_t>(r) * ndof + g] = acc;
    }
  }
}

bool pp_limit_tensor_cell(std::span<double> vals, const ReferenceElement& elem, const SampleInterpolator& interp,
                          double* sampled_min_after) {
  const int n = elem.ndof();
  const int ns = interp.n_samples;
  const auto w = elem.gauss_weights();
  double mean = 0.0;
  for (int g = 0; g < n; ++g)
    for (int m = 0; m < n; ++m) mean += w[g] * w[m] * vals[g * n + m];
  mean *= 0.25;

  // Sample values: S = I * V * I^T.
  double tmp[16 * 7];
  for (int r = 0; r < ns; ++r)
    for (int m = 0; m < n; ++m) {
      double acc = 0.0;
      for (int g = 0; g < n; ++g) acc += interp.matrix[r * n + g] * vals[g * n + m];
      tmp[r * n + m] = acc;
    }
  double mn = std::numeric_limits<double>::infinity();
  for (int r = 0; r < ns; ++r)
    for (int c = 0; c < ns; ++c) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m) acc += tmp[r * n + m] * interp.matrix[c * n + m];
      mn = std::min(mn, acc);
    }

  const double theta = pp_theta(mean, mn);
  if (theta < 1.0) {
    for (int j = 0; j < n * n; ++j) vals[j] = theta * (vals[j] - mean) + mean;
  }
  if (sampled_min_after) *sampled_min_after = theta < 1.0 ? theta * (mn - mean) + mean : mn;
  return mean >= 0.0;
}

std::vector<int> tvb_detect(const Field1D& line, double M) {
  const Grid1D& g = line.grid();
  const int N = g.n_cells;
  const std::vector<double> modal = line.modal();
  const int n = line.ndof();
  const double threshold = M * g.h() * g.h();
  std::vector<double> mean(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) mean[i] = modal[static_cast<std::size_t>(i) * n];

  auto neighbour_mean = [&](int j) {
    if (g.boundary == Boundary::Periodic) return mean[static_cast<std::size_t>((j % N + N) % N)];
    return (j < 0 || j >= N) ? 0.0 : mean[static_cast<std::size_t>(j)];
  };
  auto minmod = [](double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
    if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
    return 0.0;
  };
  auto modified = [&](double a, double b, double c) { return std::abs(a) <= threshold ? a : minmod(a, b, c); };

  std::vector<int> flagged;
  for (int i = 0; i < N; ++i) {
    const auto c = std::span<const double>(modal).subspan(static_cast<std::size_t>(i) * n, n);
    const double ubar = mean[i];
    const double right = legendre_series(c, 1.0) - ubar;
    const double left = ubar - legendre_series(c, -1.0);
    const double dp = neighbour_mean(i + 1) - ubar;
    const double dm = ubar - neighbour_mean(i - 1);
    if (modified(right, dp, dm) != right || modified(left, dp, dm) != left) flagged.push_back(i);
  }
  return flagged;
}

double smoothness_indicator(std::span<const double> modal) {
  const int n = static_cast<int>(modal.size());
  // Legendre -> monomial coefficients.
  std::vector<double> mono(static_cast<std::size_t>(n), 0.0);
  std::vector<double> pm2(static_cast<std::size_t>(n), 0.0), pm1(static_cast<std::size_t>(n), 0.0),
      cur(static_cast<std::size_t>(n), 0.0);
  for (int m = 0; m < n; ++m) {
    std::fill(cur.begin(), cur.end(), 0.0);
    if (m == 0) {
      cur[0] = 1.0;
    } else if (m == 1) {
      cur[1] = 1.0;
    } else {
      for (int j = 0; j < n; ++j) {
        double v = -(m - 1.0) * pm2[j];
        if (j > 0) v += (2.0 * m - 1.0) * pm1[j - 1];
        cur[j] = v / m;
      }
    }
    for (int j = 0; j < n; ++j) mono[j] += modal[m] * cur[j];
    pm2 = pm1;
    pm1 = cur;
  }
  double beta = 0.0;
  std::vector<double> d = mono;
  for (int l = 1; l < n; ++l) {
    // Differentiate once.
    for (int j = 0; j + 1 < n; ++j) d[j] = (j + 1) * d[j + 1];
    d[n - 1] = 0.0;
    double integral = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if ((a + b) % 2 == 0) integral += d[a] * d[b] * 2.0 / (a + b + 1);
    beta += std::ldexp(integral, 2 * l - 1);
  }
  return beta;
}

namespace {

// Modal coefficients on cell i of the neighbour polynomial extended by
// `offset` reference lengths (+2 for the left neighbour, -2 for the right).
void extend_neighbour(const ReferenceElement& elem, std::span<const double> neighbour, double offset,
                      std::span<double> out) {
  const int n = elem.ndof();
  double nodal[8];
  for (int g = 0; g < n; ++g) nodal[g] = legendre_series(neighbour, elem.gauss_nodes()[g] + offset);
  elem.nodal_to_modal().apply(std::span<const double>(nodal, static_cast<std::size_t>(n)), out);
}

void weno_cell(const Grid1D& grid, const ReferenceElement& elem, std::span<const double> modal_in,
               std::span<double> target, int i, const LimiterConfig& cfg) {
  const int n = elem.ndof();
  const int N = grid.n_cells;
  const auto own = modal_in.subspan(static_cast<std::size_t>(i) * n, n);
  double cand[3][8] = {};
  for (int m = 0; m < n; ++m) cand[0][m] = own[m];

  const int nb[2] = {i - 1, i + 1};
  const double offset[2] = {2.0, -2.0};
  for (int s = 0; s < 2; ++s) {
    int j = nb[s];
    bool present = true;
    if (grid.boundary == Boundary::Periodic) {
      j = (j % N + N) % N;
    } else if (j < 0 || j >= N) {
      present = false;
    }
    std::span<double> c(cand[s + 1], static_cast<std::size_t>(n));
    if (present) {
      extend_neighbour(elem, modal_in.subspan(static_cast<std::size_t>(j) * n, n), offset[s], c);
    }
    c[0] = own[0];  // re-centre to the troubled cell's average
  }

  double wt[3];
  double wsum = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double beta = smoothness_indicator(std::span<const double>(cand[c], static_cast<std::size_t>(n)));
    wt[c] = cfg.linear_weights[c] / std::pow(cfg.weno_eps + beta, cfg.weno_power);
    wsum += wt[c];
  }
  for (int m = 1; m < n; ++m) {
    target[m] = (wt[0] * cand[0][m] + wt[1] * cand[1][m] + wt[2] * cand[2][m]) / wsum;
  }
  target[0] = own[0];
}

}  // namespace

Field1D weno_limit(const Field1D& line, std::span<const int> troubled, const LimiterConfig& cfg) {
  const std::vector<double> modal = line.modal();
  std::vector<double> out = modal;
  const int n = line.ndof();
  for (int i : troubled) {
    if (i < 0 || i >= line.n_cells()) throw ContractError("weno_limit: troubled cell out of range");
    weno_cell(line.grid(), line.elem(), modal, std::span<double>(out).subspan(static_cast<std::size_t>(i) * n, n),
              i, cfg);
  }
  Field1D result = Field1D::from_modal(line.grid(), line.elem(), out);
  // Keep untouched cells bit-identical.
  std::vector<char> hit(static_cast<std::size_t>(line.n_cells()), 0);
  for (int i : troubled) hit[static_cast<std::size_t>(i)] = 1;
  for (int i = 0; i < line.n_cells(); ++i) {
    if (!hit[static_cast<std::size_t>(i)]) std::copy(line.cell(i).begin(), line.cell(i).end(), result.cell(i).begin());
  }
  return result;
}

int weno_limit_modal(const Grid1D& grid, const ReferenceElement& elem, std::span<double> modal,
                     const LimiterConfig& cfg) {
  const Field1D line = Field1D::from_modal(grid, elem, modal);
  const std::vector<int> troubled = tvb_detect(line, cfg.tvb_M);
  if (troubled.empty()) return 0;
  const std::vector<double> snapshot(modal.begin(), modal.end());
  const int n = elem.ndof();
  for (int i : troubled) {
    weno_cell(grid, elem, snapshot, modal.subspan(static_cast<std::size_t>(i) * n, n), i, cfg);
  }
  return static_cast<int>(troubled.size());
}

}  // namespace slsv
