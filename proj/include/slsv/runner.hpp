#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slsv/config.hpp"
#include "slsv/io.hpp"

namespace slsv {

struct FitOutcome {
  FitWindow window;
  std::optional<RateFit> fit;
  std::string error;  // set when the peaks were not found
};

struct VPRunOutput {
  std::vector<TimeSeriesRecord> records;
  std::vector<FitOutcome> fits;
  std::vector<Snapshot> snapshots;
  int steps = 0;
  int pp_failure_steps = 0;
  double min_sampled = 0.0;   // over steps, PP runs only
  double max_l1_dev = 0.0;    // max |rel_dev_l1| over the records
  double max_mass_dev = 0.0;  // max relative drift of int f over all steps
  std::vector<std::string> warnings;
  double t = 0.0;
};

/// Time series, snapshots and rate fits for a VP run. With a non-empty
/// output_dir writes timeseries.csv, snapshot_t<T>.txt and summary.json.
/// A SolverError is rethrown after the last good state is written as
/// snapshot_last_good.txt.
VPRunOutput run_vp(const RunConfig& cfg, std::ostream* log = nullptr);

struct TransportOutput {
  TransportRunResult result;
  std::vector<Snapshot> snapshots;
};
TransportOutput run_transport_config(const RunConfig& cfg, std::ostream* log = nullptr);

ReversibilityResult run_reversibility_config(const RunConfig& cfg, std::ostream* log = nullptr);

struct ConvergenceTable {
  std::string fixed_name;  // "cfl" for resolution ladders, "N" for CFL ladders
  double fixed_value = 0.0;
  std::string key_name;
  std::vector<LadderRow> rows;
};

/// Runs the ladder; a failed run is recorded in its row and the ladder goes
/// on. Writes convergence.csv and convergence.txt when output_dir is set.
std::vector<ConvergenceTable> run_convergence(const RunConfig& cfg, std::ostream* log = nullptr);

/// Snapshot file name for time t.
std::string snapshot_name(double t);

}  // namespace slsv
