#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slsv/sl_core_1d.hpp"
#include "slsv/split_2d.hpp"

namespace slsv {

struct Functionals {
  double l1 = 0.0;
  double l2 = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
};

struct TimeSeriesRecord {
  double t = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double e_l2 = 0.0;
  double e_linf = 0.0;
  double rel_dev_l1 = 0.0;
  double rel_dev_l2 = 0.0;
  double rel_dev_energy = 0.0;
  double rel_dev_entropy = 0.0;
};

/// l1 = int |f|, l2 = sqrt(int f^2), energy = int v^2 f + int E^2,
/// entropy = -int f log f with f clamped below at entropy_floor.
/// The second coordinate of f is v. E may be empty (pure transport).
Functionals functionals(const Field2D& f, const Field1D* E, double entropy_floor = 1e-14);

struct ENorms {
  double l2 = 0.0;
  double linf = 0.0;
};
ENorms efield_norms(const Field1D& E);

/// Fills the rel_dev_* fields against the initial record (zero when the
/// reference value is zero).
TimeSeriesRecord make_record(double t, const Functionals& fn, const ENorms& en, const TimeSeriesRecord* initial);

enum class FitMode {
  LeastSquares,  // regression through every peak in the window
  Endpoints,     // line through the first and last peak of the window
};

struct Peak {
  double t = 0.0;
  double log_value = 0.0;
};

struct RateFit {
  double gamma = 0.0;
  int peak_lo = 0;
  int peak_hi = 0;
  std::vector<Peak> peaks;  // the peaks inside the window
  double residual = 0.0;    // rms of ln-residuals about the fitted line
};

/// Strict 3-point local maxima, merged when closer than min_separation
/// (the larger one survives). Values must be positive. With include_initial
/// a decreasing start counts as peak 1.
std::vector<Peak> find_peaks(std::span<const double> t, std::span<const double> value, double min_separation,
                             bool include_initial = false);

/// Rate from peaks peak_lo..peak_hi (1-based, inclusive). The default
/// separation is a quarter plasma period.
RateFit fit_rate(std::span<const double> t, std::span<const double> value, int peak_lo, int peak_hi,
                 FitMode mode = FitMode::LeastSquares, double min_separation = 1.5707963267948966,
                 bool include_initial = false);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Over-integrated with (k+2) Gauss points per direction and cell; linf is
/// the maximum over those points. l2 is the root mean square
/// sqrt(int e^2 / |domain|).
ErrorNorms error_norms(const Field1D& u, const std::function<double(double)>& exact);
ErrorNorms error_norms(const Field2D& u, const std::function<double(double, double)>& exact, int extra_points = 1);

struct ConvergenceRow {
  int resolution = 0;
  double l2_err = 0.0;
  std::optional<double> l2_order;
  double linf_err = 0.0;
  std::optional<double> linf_order;
};

/// Orders from consecutive rows: log(e_coarse/e_fine) / log(N_fine/N_coarse).
std::vector<ConvergenceRow> convergence_table(const std::vector<std::pair<int, ErrorNorms>>& runs);

}  // namespace slsv
