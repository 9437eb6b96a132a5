#include "slsv/vp_driver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slsv/errors.hpp"

namespace slsv {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::WeakLandau: return "WeakLandau";
    case Scenario::StrongLandau: return "StrongLandau";
    case Scenario::TwoStream1: return "TwoStream1";
    case Scenario::TwoStream2: return "TwoStream2";
    case Scenario::Custom: return "Custom";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& name) {
  for (Scenario s : {Scenario::WeakLandau, Scenario::StrongLandau, Scenario::TwoStream1, Scenario::TwoStream2,
                     Scenario::Custom}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

ScenarioSpec ScenarioSpec::preset(Scenario s) {
  ScenarioSpec p;
  p.name = s;
  switch (s) {
    case Scenario::WeakLandau:
    case Scenario::Custom:
      p.alpha = 0.01;
      p.kmode = 0.5;
      p.x_hi = 4 * kPi;
      p.v_max = 2 * kPi;
      break;
    case Scenario::StrongLandau:
      p.alpha = 0.5;
      p.kmode = 0.5;
      p.x_hi = 4 * kPi;
      p.v_max = 2 * kPi;
      break;
    case Scenario::TwoStream1:
      p.alpha = 0.01;
      p.kmode = 0.5;
      p.x_hi = 4 * kPi;
      p.v_max = 10.0;
      break;
    case Scenario::TwoStream2:
      p.alpha = 0.05;
      p.kmode = 2.0 / 13.0;
      p.u_drift = 0.99;
      p.v_th = 0.3;
      p.x_hi = 13 * kPi;
      p.v_max = 2 * kPi;
      break;
  }
  return p;
}

void ScenarioSpec::validate() const {
  if (!(x_hi > x_lo)) throw ConfigError("scenario: x_hi must exceed x_lo");
  if (!(v_max > 0.0)) throw ConfigError("scenario: v_max must be positive");
  if (name == Scenario::Custom) {
    if (!custom_f0) throw ConfigError("scenario: Custom needs an initial condition");
    return;
  }
  if (!(kmode > 0.0)) throw ConfigError("scenario: kmode must be positive");
  if (alpha < 0.0) throw ConfigError("scenario: alpha must be >= 0");
  if (name == Scenario::TwoStream2 && !(v_th > 0.0)) throw ConfigError("scenario: v_th must be positive");
  const double waves = (x_hi - x_lo) * kmode / (2 * kPi);
  if (std::round(waves) < 1.0 || std::abs(waves - std::round(waves)) > 1e-9) {
    throw ConfigError("scenario: x-domain length " + std::to_string(x_hi - x_lo) +
                      " is not a multiple of 2 pi / kmode");
  }
}

double ScenarioSpec::f0(double x, double v) const {
  const double norm = 1.0 / std::sqrt(2 * kPi);
  switch (name) {
    case Scenario::WeakLandau:
    case Scenario::StrongLandau:
      return norm * (1 + alpha * std::cos(kmode * x)) * std::exp(-0.5 * v * v);
    case Scenario::TwoStream1:
      return 2.0 / 7.0 * norm * (1 + 5 * v * v) *
             (1 + alpha * ((std::cos(2 * kmode * x) + std::cos(3 * kmode * x)) / 1.2 + std::cos(kmode * x))) *
             std::exp(-0.5 * v * v);
    case Scenario::TwoStream2: {
      const double a = (v - u_drift) / v_th, b = (v + u_drift) / v_th;
      return norm / (2 * v_th) * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)) * (1 + alpha * std::cos(kmode * x));
    }
    case Scenario::Custom:
      return custom_f0(x, v);
  }
  return 0.0;
}

double compute_dt(const TimeControls& tc, const Grid1D& grid_x, const Grid1D& grid_v, double max_e, double t_now) {
  if (!(tc.cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (max_e < 0.0) throw ContractError("compute_dt: max|E| must be >= 0");
  const double v_max = std::max(std::abs(grid_v.x_lo), std::abs(grid_v.x_hi));
  double dt = tc.cfl / (v_max / grid_x.h() + max_e / grid_v.h());
  if (tc.dt_cap) dt = std::min(dt, *tc.dt_cap);
  const double left = tc.t_end - t_now;
  // Absorb a sliver of a final step into the current one.
  if (left <= dt * (1.0 + 1e-10)) dt = left;
  return dt;
}

VPState make_state(Field2D f, double t) {
  if (f.grid_x().boundary != Boundary::Periodic) throw ContractError("VP state needs a periodic x-grid");
  if (f.grid_y().boundary != Boundary::ZeroInflow) throw ContractError("VP state needs a ZeroInflow v-grid");
  EFieldState E = ldg_solve(density_moment(f));
  return VPState{std::move(f), std::move(E), t, 0};
}

VPState init_scenario(const ScenarioSpec& spec, int nx, int nv, int k) {
  spec.validate();
  if (nx < 1 || nv < 2) throw ConfigError("mesh sizes must be positive (nv >= 2)");
  const Grid1D gx(spec.x_lo, spec.x_hi, nx, Boundary::Periodic);
  const Grid1D gv(-spec.v_max, spec.v_max, nv, Boundary::ZeroInflow);
  return make_state(Field2D::from_function(gx, gv, ReferenceElement::get(k), [&](double x, double v) {
    return spec.f0(x, v);
  }));
}

double vmax_edge_fraction(const Field2D& f) {
  const int nx = f.grid_x().n_cells;
  const int nv = f.grid_y().n_cells;
  double edge = 0.0, total = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nv; ++j) {
      const double m = std::abs(f.cell_mean(i, j));
      total += m;
      if (j < 2 || j >= nv - 2) edge += m;
    }
  return total > 0.0 ? edge / total : 0.0;
}

StepReport vp_step(VPState& s, const TimeControls& tc, const LimiterConfig& limiters, double dt) {
  StepReport rep;
  const Grid1D& gx = s.f.grid_x();
  const Grid1D& gv = s.f.grid_y();
  rep.dt = dt > 0.0 ? dt : compute_dt(tc, gx, gv, s.E.max_abs, s.t);
  if (!(rep.dt > 0.0)) throw ContractError("vp_step: dt must be positive");
  const double h = rep.dt;
  const ReferenceElement& elem = s.f.elem();
  const int n = elem.ndof();

  const LineCoefficient stream = [](double v, int, int) { return VelocityField1D::constant(v); };
  SweepStats stats;
  sweep_inplace(s.f, SweepPlan{Direction::X, 0.5 * h, stream, &limiters}, s.t + 0.5 * h, &stats);

  const EFieldState half = ldg_solve(density_moment(s.f));
  std::vector<double> e_nodal(static_cast<std::size_t>(gx.n_cells) * n);
  for (int i = 0; i < gx.n_cells; ++i) {
    elem.avg_to_nodal().apply(half.E.cell(i), std::span<double>(e_nodal).subspan(static_cast<std::size_t>(i) * n, n));
  }
  const LineCoefficient accel = [&e_nodal, n](double, int cell, int node) {
    return VelocityField1D::constant(e_nodal[static_cast<std::size_t>(cell) * n + node]);
  };
  sweep_inplace(s.f, SweepPlan{Direction::Y, h, accel, &limiters}, s.t + h, &stats);
  sweep_inplace(s.f, SweepPlan{Direction::X, 0.5 * h, stream, &limiters}, s.t + h, &stats);

  if (limiters.pp_enabled) rep.pp_failures = pp_limit_field(s.f, &rep.sampled_min);
  rep.limited_cells = stats.limited_cells;
  rep.vmax_warning = vmax_edge_fraction(s.f) > 1e-6;

  s.E = ldg_solve(density_moment(s.f));
  s.t += h;
  ++s.step;
  return rep;
}

VPState reverse_velocity(const VPState& s) {
  const Grid1D& gv = s.f.grid_y();
  const double span = std::max(std::abs(gv.x_lo), std::abs(gv.x_hi));
  if (std::abs(gv.x_lo + gv.x_hi) > 1e-12 * span) throw ContractError("reverse_velocity: v-grid is not symmetric");
  VPState out{s.f, s.E, s.t, s.step};
  const int nx = s.f.grid_x().n_cells;
  const int nv = gv.n_cells;
  const int n = s.f.ndof();
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nv; ++j)
      for (int g = 0; g < n; ++g)
        for (int m = 0; m < n; ++m) out.f.at(i, j, g, m) = s.f.at(i, nv - 1 - j, g, n - 1 - m);
  return out;
}

namespace {

TimeSeriesRecord record_of(const VPState& s, const TimeSeriesRecord* initial) {
  return make_record(s.t, functionals(s.f, &s.E.E), efield_norms(s.E.E), initial);
}

}  // namespace

VPState run(VPState s, const TimeControls& tc, const LimiterConfig& limiters, const RunOptions& opts) {
  if (opts.record_stride < 1) throw ConfigError("record_stride must be >= 1");
  limiters.validate();
  std::vector<double> pending = opts.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snap = 0;

  const TimeSeriesRecord initial = record_of(s, nullptr);
  if (opts.on_record) opts.on_record(initial);
  bool warned = false;
  while (s.t < tc.t_end) {
    const double dt = compute_dt(tc, s.f.grid_x(), s.f.grid_y(), s.E.max_abs, s.t);
    while (next_snap < pending.size() && pending[next_snap] <= s.t + 0.5 * dt) {
      if (opts.on_snapshot) opts.on_snapshot(s);
      ++next_snap;
    }
    const double t_before = s.t;
    StepReport rep;
    try {
      VPState trial = s;
      rep = vp_step(trial, tc, limiters, dt);
      s = std::move(trial);
    } catch (const SolverError&) {
      if (opts.on_failure) opts.on_failure(s);
      throw;
    }
    if (dt >= tc.t_end - t_before) s.t = tc.t_end;
    if (opts.on_step) opts.on_step(rep, s);
    if (opts.on_warning) {
      if (rep.pp_failures > 0) {
        opts.on_warning("step " + std::to_string(s.step) + ": " + std::to_string(rep.pp_failures) +
                        " cells with negative average (positivity lost before limiting)");
      }
      if (rep.vmax_warning && !warned) {
        opts.on_warning("v_max too small: more than 1e-6 of the mass sits in the outer velocity cells");
        warned = true;
      }
    }
    const bool last = s.t >= tc.t_end;
    if (opts.on_record && (s.step % opts.record_stride == 0 || last)) opts.on_record(record_of(s, &initial));
  }
  while (next_snap < pending.size()) {
    if (opts.on_snapshot) opts.on_snapshot(s);
    ++next_snap;
  }
  return s;
}

ReversibilityResult reversibility_test(const ScenarioSpec& spec, int nx, int nv, int k, double cfl, double T,
                                       const LimiterConfig& limiters) {
  VPState s = init_scenario(spec, nx, nv, k);
  TimeControls tc{cfl, T, std::nullopt};
  ReversibilityResult res;
  RunOptions opts;
  opts.on_step = [&res](const StepReport&, const VPState&) { ++res.steps; };
  s = run(std::move(s), tc, limiters, opts);
  s = reverse_velocity(s);
  s.t = 0.0;
  s = run(std::move(s), tc, limiters, opts);
  res.err = error_norms(s.f, [&spec](double x, double v) { return spec.f0(x, -v); });
  return res;
}

}  // namespace slsv
