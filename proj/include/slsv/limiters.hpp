#pragma once

#include <array>
#include <span>
#include <vector>

#include "slsv/mesh_basis.hpp"
#include "slsv/sl_core_1d.hpp"

namespace slsv {

/// Limiter knobs. WENO follows the simple WENO limiter of Zhong & Shu:
/// TVB-minmod troubled-cell indicator, candidate polynomials from the cell
/// and its two neighbours, squared-seminorm smoothness indicators.
struct LimiterConfig {
  bool pp_enabled = false;
  bool weno_enabled = false;
  double tvb_M = 1.0;
  double weno_eps = 1e-6;
  int weno_power = 2;
  /// {centre, left, right}
  std::array<double, 3> linear_weights{0.998, 0.001, 0.001};

  /// Throws ConfigError on non-positive weights, eps <= 0 or M < 0.
  void validate() const;
  bool operator==(const LimiterConfig&) const = default;
};

struct PPResult {
  LocalPoly poly;
  double theta = 1.0;
  bool failed = false;  // cell average was negative
};

/// Scales poly toward its mean so that its minimum over `samples` is >= 0.
PPResult pp_limit(const LocalPoly& poly, std::span<const double> samples);

/// Scaling factor for a cell with the given average and sampled minimum.
/// Returns 0 when the average is negative (the cell cannot be repaired).
double pp_theta(double mean, double sampled_min);

/// Interpolation from the (k+1) Gauss nodes of a cell to its sample points
/// (Gauss nodes plus CV boundaries), (2k+3) x (k+1) row-major.
struct SampleInterpolator {
  int n_samples = 0;
  int ndof = 0;
  std::vector<double> matrix;

  explicit SampleInterpolator(const ReferenceElement& elem);
};

/// Applies the PP limiter in place to one Q^k cell given by its (k+1)^2 Gauss
/// node values (index g*(k+1)+m). Returns false if the cell mean is negative.
bool pp_limit_tensor_cell(std::span<double> vals, const ReferenceElement& elem, const SampleInterpolator& interp,
                          double* sampled_min_after = nullptr);

/// Cells whose TVB-modified interface deviations differ from the raw ones,
/// with TVB threshold M*h^2. Ascending.
std::vector<int> tvb_detect(const Field1D& line, double M);

/// WENO reconstruction on the troubled cells; cell averages are preserved.
Field1D weno_limit(const Field1D& line, std::span<const int> troubled, const LimiterConfig& cfg);

/// Detect-and-limit on a line held as modal coefficients (N*(k+1) values),
/// in place. Returns the number of limited cells.
int weno_limit_modal(const Grid1D& grid, const ReferenceElement& elem, std::span<double> modal,
                     const LimiterConfig& cfg);

/// Sum over l=1..k of 2^(2l-1) * int_{-1}^{1} (d^l p / ds^l)^2 ds, the
/// scale-free smoothness indicator of a modal polynomial on one cell.
double smoothness_indicator(std::span<const double> modal);

}  // namespace slsv
