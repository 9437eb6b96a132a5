#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slsv/diagnostics.hpp"
#include "slsv/field_solver.hpp"
#include "slsv/limiters.hpp"
#include "slsv/split_2d.hpp"

namespace slsv {

enum class Scenario { WeakLandau, StrongLandau, TwoStream1, TwoStream2, Custom };

std::string to_string(Scenario s);
/// Throws ConfigError on unknown names.
Scenario scenario_from_string(const std::string& name);

struct ScenarioSpec {
  Scenario name = Scenario::WeakLandau;
  double alpha = 0.01;
  double kmode = 0.5;
  double u_drift = 0.0;
  double v_th = 1.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double v_max = 0.0;
  /// Initial condition for Scenario::Custom.
  std::function<double(double x, double v)> custom_f0;

  /// Parameters and domain of a named scenario.
  static ScenarioSpec preset(Scenario s);

  /// Throws ConfigError when the x-domain is not a whole number of
  /// perturbation wavelengths 2 pi / kmode, or a parameter is out of range.
  void validate() const;

  [[nodiscard]] double f0(double x, double v) const;
};

struct TimeControls {
  double cfl = 1.0;
  double t_end = 0.0;
  std::optional<double> dt_cap;
};

/// cfl / (v_max/dx + maxE/dv), capped by dt_cap, and shortened so the step
/// ends exactly on t_end.
double compute_dt(const TimeControls& tc, const Grid1D& grid_x, const Grid1D& grid_v, double max_e, double t_now);

struct VPState {
  Field2D f;
  EFieldState E;
  double t = 0.0;
  int step = 0;
};

/// Samples the scenario at the tensor Gauss nodes and solves for E.
VPState init_scenario(const ScenarioSpec& spec, int nx, int nv, int k);

/// Builds a state from f (E from the field solve).
VPState make_state(Field2D f, double t = 0.0);

struct StepReport {
  double dt = 0.0;
  int pp_failures = 0;
  int limited_cells = 0;
  double sampled_min = 0.0;  // after PP; only meaningful with pp_enabled
  bool vmax_warning = false;
};

/// One split step: x-sweep dt/2, field solve for E^{n+1/2}, v-sweep dt,
/// x-sweep dt/2, limiters, then E at the new time. dt <= 0 means "use the
/// CFL rule".
StepReport vp_step(VPState& s, const TimeControls& tc, const LimiterConfig& limiters, double dt = 0.0);

/// f(x, v) -> f(x, -v). Requires a v-grid symmetric about 0.
VPState reverse_velocity(const VPState& s);

/// Mass fraction in the two outermost v-cell rings on each side.
double vmax_edge_fraction(const Field2D& f);

struct RunOptions {
  int record_stride = 1;
  std::vector<double> snapshot_times;
  std::function<void(const TimeSeriesRecord&)> on_record;
  std::function<void(const VPState&)> on_snapshot;
  std::function<void(const StepReport&, const VPState&)> on_step;
  std::function<void(const std::string&)> on_warning;
  /// Called with the last good state before a step failure is rethrown.
  std::function<void(const VPState&)> on_failure;
};

/// Time loop from s to tc.t_end. Records at t = 0, every record_stride
/// steps and at the final step.
VPState run(VPState s, const TimeControls& tc, const LimiterConfig& limiters, const RunOptions& opts = {});

/// Forward T, reverse velocity, forward T; error against f0(x, -v).
struct ReversibilityResult {
  ErrorNorms err;
  int steps = 0;
};
ReversibilityResult reversibility_test(const ScenarioSpec& spec, int nx, int nv, int k, double cfl, double T,
                                       const LimiterConfig& limiters = {});

}  // namespace slsv
