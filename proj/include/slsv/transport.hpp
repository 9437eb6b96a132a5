#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slsv/diagnostics.hpp"
#include "slsv/io.hpp"
#include "slsv/limiters.hpp"
#include "slsv/split_2d.hpp"

namespace slsv {

enum class TransportPreset { Linear1D, Linear2D, RigidBody, RigidBodyAniso, SwirlCone, Swirling, RigidCone };

std::string to_string(TransportPreset p);
/// Empty when the name is not a transport preset.
std::optional<TransportPreset> transport_from_string(const std::string& name);

/// Passive transport u_t + (a u)_x + (b u)_y = 0 with periodic boundaries.
struct TransportProblem {
  TransportPreset preset = TransportPreset::Linear1D;
  int dims = 1;
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
  std::function<double(double, double)> u0;
  /// Exact solution; for the swirling flows only at whole periods.
  std::function<double(double, double, double)> exact;
  double period = 0.0;  // > 0: exact(x, y, t) is u0 at multiples of period
  LineCoefficient a;    // x-direction speed on the line at y
  LineCoefficient b;    // y-direction speed on the line at x

  static TransportProblem preset_problem(TransportPreset p);
  [[nodiscard]] bool has_exact_at(double t) const;
  /// max over the domain of |a|/hx + |b|/hy, sampled on a 257^2 lattice at
  /// t = 0 (where every preset speed peaks).
  [[nodiscard]] double max_rate(double hx, double hy) const;
};

/// Slotted disk, cone and smooth hump on [-pi, pi]^2.
double cone_set(double x, double y);
/// C^5 cosine bell of radius 0.3 pi centred at (0.3 pi, 0).
double cosine_bell(double x, double y);

struct TransportRunResult {
  double t = 0.0;
  int steps = 0;
  std::optional<ErrorNorms> err;
  double u_min = 0.0;  // over stored node values
  double u_max = 0.0;
  double mass0 = 0.0;
  double mass = 0.0;
};

struct TransportRun {
  int nx = 0;
  int ny = 0;  // ignored for 1D
  int k = 2;
  double cfl = 1.0;  // dt = cfl / max_rate(hx, hy), last step shortened onto t_end
  double t_end = 0.0;
  LimiterConfig limiters;
};

using TransportSnapshot = std::function<void(const Snapshot&)>;

TransportRunResult run_transport(const TransportProblem& prob, const TransportRun& run,
                                 const std::vector<double>& snapshot_times = {},
                                 const TransportSnapshot& on_snapshot = {});

}  // namespace slsv
