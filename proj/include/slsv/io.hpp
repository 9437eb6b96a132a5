#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slsv/diagnostics.hpp"
#include "slsv/sl_core_1d.hpp"
#include "slsv/split_2d.hpp"

namespace slsv {

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);
/// Shortest decimal that parses back to the same double.
std::string format_shortest(double v);

/// Field at the Gauss points of every SV. 1D: k+1 values per SV, SVs in
/// order. 2D: (k+1)^2 values per SV in (g, m) order, SVs row-major over
/// (i, j) with j fastest.
struct Snapshot {
  std::string mode;
  int dims = 2;
  int k = 0;
  int nx = 0;
  int ny = 0;
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
  double t = 0.0;
  std::vector<double> values;

  bool operator==(const Snapshot&) const = default;
};

Snapshot make_snapshot(const Field2D& f, double t, const std::string& mode);
Snapshot make_snapshot(const Field1D& u, double t, const std::string& mode);

void write_snapshot(std::ostream& os, const Snapshot& s);
/// Throws ConfigError naming the line on malformed input.
Snapshot read_snapshot(std::istream& is);
void save_snapshot(const std::string& path, const Snapshot& s);
Snapshot load_snapshot(const std::string& path);

extern const char* const kTimeSeriesHeader;
void write_record(std::ostream& os, const TimeSeriesRecord& r);

/// Rows keyed by a resolution or a CFL number.
struct LadderRow {
  double key = 0.0;
  ErrorNorms err;
  std::optional<double> l2_order;
  std::optional<double> linf_order;
  std::string failure;  // non-empty when the run aborted
};

/// Orders log(e_i-1 / e_i) / log(key_i / key_i-1) between successful
/// neighbours. With a CFL key the order is taken against the growing CFL, so
/// it comes out positive for errors that grow with the step.
std::vector<LadderRow> ladder_orders(std::vector<LadderRow> rows, bool key_is_cfl);

/// CSV rows "fixed,key,l2,l2_order,linf,linf_order,failure"; the header is
/// written when `header` is set.
void write_ladder_csv(std::ostream& os, const std::vector<LadderRow>& rows, const std::string& fixed_name,
                      double fixed_value, const std::string& key_name, bool header);
void write_ladder_table(std::ostream& os, const std::vector<LadderRow>& rows, const std::string& key_name,
                        const std::string& title);

}  // namespace slsv
