#include "slsv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slsv/errors.hpp"

namespace slsv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSwirlPeriod = 1.5;

constexpr TransportPreset kAll[] = {TransportPreset::Linear1D,       TransportPreset::Linear2D,
                                    TransportPreset::RigidBody,      TransportPreset::RigidBodyAniso,
                                    TransportPreset::SwirlCone,      TransportPreset::Swirling,
                                    TransportPreset::RigidCone};

LineCoefficient constant_speed(double c) {
  return [c](double, int, int) { return VelocityField1D::constant(c); };
}

double swirl_g(double t) { return kPi * std::cos(kPi * t / kSwirlPeriod); }

}  // namespace

std::string to_string(TransportPreset p) {
  switch (p) {
    case TransportPreset::Linear1D: return "Linear1D";
    case TransportPreset::Linear2D: return "Linear2D";
    case TransportPreset::RigidBody: return "RigidBody";
    case TransportPreset::RigidBodyAniso: return "RigidBodyAniso";
    case TransportPreset::SwirlCone: return "SwirlCone";
    case TransportPreset::Swirling: return "Swirling";
    case TransportPreset::RigidCone: return "RigidCone";
  }
  return "?";
}

std::optional<TransportPreset> transport_from_string(const std::string& name) {
  for (TransportPreset p : kAll)
    if (to_string(p) == name) return p;
  return std::nullopt;
}

double cone_set(double x, double y) {
  const double r0 = 0.3 * kPi;
  // slotted disk
  {
    const double dx = x, dy = y - 0.5 * kPi;
    if (std::hypot(dx, dy) <= r0 && (std::abs(dx) >= 0.05 * kPi || y >= 0.7 * kPi)) return 1.0;
  }
  // cone
  {
    const double r = std::hypot(x, y + 0.5 * kPi) / r0;
    if (r <= 1.0) return 1.0 - r;
  }
  // hump
  {
    const double r = std::hypot(x + 0.5 * kPi, y) / r0;
    if (r <= 1.0) return 0.25 * (1.0 + std::cos(kPi * r));
  }
  return 0.0;
}

double cosine_bell(double x, double y) {
  const double r0 = 0.3 * kPi;
  const double r = std::hypot(x - 0.3 * kPi, y);
  if (r >= r0) return 0.0;
  return r0 * std::pow(std::cos(0.5 * kPi * r / r0), 6);
}

TransportProblem TransportProblem::preset_problem(TransportPreset p) {
  TransportProblem tp;
  tp.preset = p;
  tp.dims = 2;
  switch (p) {
    case TransportPreset::Linear1D:
      tp.dims = 1;
      tp.x_hi = 2 * kPi;
      tp.u0 = [](double x, double) { return std::sin(x); };
      tp.exact = [](double x, double, double t) { return std::sin(x - t); };
      tp.a = constant_speed(1.0);
      break;
    case TransportPreset::Linear2D:
      tp.x_hi = tp.y_hi = 2 * kPi;
      tp.u0 = [](double x, double y) { return std::sin(x + y); };
      tp.exact = [](double x, double y, double t) { return std::sin(x + y - 2 * t); };
      tp.a = constant_speed(1.0);
      tp.b = constant_speed(1.0);
      break;
    case TransportPreset::RigidBody:
    case TransportPreset::RigidBodyAniso:
    case TransportPreset::RigidCone: {
      const double half = p == TransportPreset::RigidCone ? kPi : 2 * kPi;
      tp.x_lo = tp.y_lo = -half;
      tp.x_hi = tp.y_hi = half;
      if (p == TransportPreset::RigidBody) tp.u0 = [](double x, double y) { return std::exp(-x * x - y * y); };
      else if (p == TransportPreset::RigidBodyAniso)
        tp.u0 = [](double x, double y) { return std::exp(-x * x - 10 * y * y); };
      else tp.u0 = cone_set;
      tp.exact = [u0 = tp.u0](double x, double y, double t) {
        const double c = std::cos(t), s = std::sin(t);
        return u0(c * x + s * y, -s * x + c * y);
      };
      tp.a = [](double y, int, int) { return VelocityField1D::constant(-y); };
      tp.b = [](double x, int, int) { return VelocityField1D::constant(x); };
      break;
    }
    case TransportPreset::SwirlCone:
    case TransportPreset::Swirling:
      tp.x_lo = tp.y_lo = -kPi;
      tp.x_hi = tp.y_hi = kPi;
      tp.u0 = p == TransportPreset::Swirling ? cosine_bell : cone_set;
      tp.period = kSwirlPeriod;
      tp.exact = [u0 = tp.u0](double x, double y, double) { return u0(x, y); };
      tp.a = [](double y, int, int) {
        const double sy = std::sin(y);
        return VelocityField1D::analytic([sy](double x, double t) {
          const double c = std::cos(0.5 * x);
          return -c * c * sy * swirl_g(t);
        });
      };
      tp.b = [](double x, int, int) {
        const double sx = std::sin(x);
        return VelocityField1D::analytic([sx](double y, double t) {
          const double c = std::cos(0.5 * y);
          return sx * c * c * swirl_g(t);
        });
      };
      break;
  }
  return tp;
}

bool TransportProblem::has_exact_at(double t) const {
  if (!exact) return false;
  if (period <= 0.0) return true;
  const double r = t / period;
  return std::abs(r - std::round(r)) < 1e-12 * std::max(1.0, r);
}

double TransportProblem::max_rate(double hx, double hy) const {
  constexpr int n = 257;
  auto speed = [](const VelocityField1D& v, double s) {
    return v.kind() == VelocityField1D::Kind::Constant ? v.constant_value() : v.evaluator()(s, 0.0);
  };
  auto at = [&](double lo, double hi, int q) { return lo + (hi - lo) * q / (n - 1); };
  double best = 0.0;
  if (dims == 1) {
    const VelocityField1D va = a(0.0, 0, 0);
    for (int q = 0; q < n; ++q) best = std::max(best, std::abs(speed(va, at(x_lo, x_hi, q))) / hx);
    return best;
  }
  std::vector<double> ra(n * n), rb(n * n);
  for (int j = 0; j < n; ++j) {
    const double y = at(y_lo, y_hi, j);
    const VelocityField1D va = a(y, 0, 0);
    for (int i = 0; i < n; ++i) ra[i * n + j] = std::abs(speed(va, at(x_lo, x_hi, i))) / hx;
  }
  for (int i = 0; i < n; ++i) {
    const double x = at(x_lo, x_hi, i);
    const VelocityField1D vb = b(x, 0, 0);
    for (int j = 0; j < n; ++j) rb[i * n + j] = std::abs(speed(vb, at(y_lo, y_hi, j))) / hy;
  }
  for (int q = 0; q < n * n; ++q) best = std::max(best, ra[q] + rb[q]);
  return best;
}

namespace {

double transport_dt(double cfl, double unit, double t_now, double t_end) {
  const double dt = cfl * unit;
  const double left = t_end - t_now;
  return left <= dt * (1.0 + 1e-10) ? left : dt;
}

template <class Field, class Step, class Snap>
int time_loop(Field& u, double cfl, double unit, double t_end, std::vector<double> snaps, const Step& step,
              const Snap& snap, double& t) {
  std::sort(snaps.begin(), snaps.end());
  std::size_t next = 0;
  int steps = 0;
  t = 0.0;
  while (t < t_end) {
    const double dt = transport_dt(cfl, unit, t, t_end);
    while (next < snaps.size() && snaps[next] <= t + 0.5 * dt) {
      snap(u, t);
      ++next;
    }
    step(u, t, dt);
    t = dt >= t_end - t ? t_end : t + dt;
    ++steps;
  }
  for (; next < snaps.size(); ++next) snap(u, t);
  return steps;
}

}  // namespace

TransportRunResult run_transport(const TransportProblem& prob, const TransportRun& run,
                                 const std::vector<double>& snapshot_times, const TransportSnapshot& on_snapshot) {
  if (run.nx < 1 || (prob.dims == 2 && run.ny < 1)) throw ConfigError("mesh sizes must be positive");
  if (!(run.cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (run.t_end < 0.0) throw ConfigError("t_end must be >= 0");
  run.limiters.validate();
  const ReferenceElement& elem = ReferenceElement::get(run.k);
  const std::string mode = prob.dims == 1 ? "Transport1D" : "Transport2D";
  TransportRunResult res;

  if (prob.dims == 1) {
    const Grid1D g(prob.x_lo, prob.x_hi, run.nx);
    Field1D u = Field1D::from_function(g, elem, [&](double x) { return prob.u0(x, 0.0); });
    res.mass0 = u.mass();
    const VelocityField1D speed = prob.a(0.0, 0, 0);
    auto step = [&](Field1D& v, double t, double dt) {
      v = sl_step_1d(v, speed, t + dt, dt);
      if (run.limiters.weno_enabled) v = weno_limit(v, tvb_detect(v, run.limiters.tvb_M), run.limiters);
    };
    auto snap = [&](const Field1D& v, double t) {
      if (on_snapshot) on_snapshot(make_snapshot(v, t, mode));
    };
    res.steps = time_loop(u, run.cfl, 1.0 / prob.max_rate(g.h(), 0.0), run.t_end, snapshot_times, step, snap, res.t);
    res.mass = u.mass();
    const Snapshot nodes = make_snapshot(u, res.t, mode);
    res.u_min = *std::min_element(nodes.values.begin(), nodes.values.end());
    res.u_max = *std::max_element(nodes.values.begin(), nodes.values.end());
    if (prob.has_exact_at(res.t)) {
      res.err = error_norms(u, [&](double x) { return prob.exact(x, 0.0, res.t); });
    }
    return res;
  }

  const Grid1D gx(prob.x_lo, prob.x_hi, run.nx), gy(prob.y_lo, prob.y_hi, run.ny);
  Field2D f = Field2D::from_function(gx, gy, elem, prob.u0);
  res.mass0 = f.mass();
  const bool limited = run.limiters.pp_enabled || run.limiters.weno_enabled;
  auto step = [&](Field2D& v, double t, double dt) {
    v = strang_step(v, prob.a, prob.b, t, dt, limited ? &run.limiters : nullptr);
  };
  auto snap = [&](const Field2D& v, double t) {
    if (on_snapshot) on_snapshot(make_snapshot(v, t, mode));
  };
  res.steps = time_loop(f, run.cfl, 1.0 / prob.max_rate(gx.h(), gy.h()), run.t_end, snapshot_times, step, snap, res.t);
  res.mass = f.mass();
  res.u_min = *std::min_element(f.values().begin(), f.values().end());
  res.u_max = *std::max_element(f.values().begin(), f.values().end());
  if (prob.has_exact_at(res.t)) {
    res.err = error_norms(f, [&](double x, double y) { return prob.exact(x, y, res.t); });
  }
  return res;
}

}  // namespace slsv
