#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slsv/diagnostics.hpp"
#include "slsv/limiters.hpp"
#include "slsv/transport.hpp"
#include "slsv/vp_driver.hpp"

namespace slsv {

enum class RunMode { Transport1D, Transport2D, VP, Convergence, Reversibility };

std::string to_string(RunMode m);

struct FitWindow {
  int peak_lo = 1;
  int peak_hi = 1;
  FitMode mode = FitMode::LeastSquares;
  bool operator==(const FitWindow&) const = default;
};

/// One run, as read from an INI-style file:
///
///   [run]          mode, k, nx, nv | ny, cfl, t_end, dt_cap
///   [scenario]     name, alpha, kmode, u_drift, v_th, x_lo, x_hi, v_max
///   [limiters]     pp, weno, tvb_M, weno_eps, weno_power, linear_weights
///   [output]       dir, record_stride, snapshot_times
///   [fit]          windows            e.g. "1-8 lsq, 10-16 endpoints"
///                  include_initial    t = 0 is peak 1
///   [convergence]  ladder, cfls, vary (resolution | cfl)
struct RunConfig {
  RunMode mode = RunMode::VP;
  std::string scenario;

  // VP scenario parameters; start from the named preset
  double alpha = 0.0;
  double kmode = 0.0;
  double u_drift = 0.0;
  double v_th = 1.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double v_max = 0.0;

  int k = 2;
  int nx = 0;
  int nv = 0;  // velocity cells for VP, y cells for 2D transport
  double cfl = 1.0;
  double t_end = 0.0;
  std::optional<double> dt_cap;

  LimiterConfig limiters;

  std::string output_dir = "out";
  int record_stride = 1;
  std::vector<double> snapshot_times;

  std::vector<FitWindow> fits;
  bool fit_include_initial = false;  // t = 0 counts as peak 1

  std::vector<int> ladder;
  std::vector<double> cfls;
  bool vary_cfl = false;

  bool operator==(const RunConfig&) const = default;

  [[nodiscard]] bool vp_scenario() const;
  [[nodiscard]] ScenarioSpec scenario_spec() const;
  [[nodiscard]] TransportProblem transport_problem() const;
  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Throws ConfigError naming the offending key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Effective configuration with every default spelled out; parses back to an
/// equal RunConfig.
std::string emit_config(const RunConfig& cfg);

/// Reference settings for a scenario or transport preset.
RunConfig preset_config(const std::string& name);

/// Key reference with defaults, for --help.
std::string config_reference();

}  // namespace slsv
