#include "slsv/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slsv/errors.hpp"

namespace slsv {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Snapshot make_snapshot(const Field2D& f, double t, const std::string& mode) {
  Snapshot s;
  s.mode = mode;
  s.dims = 2;
  s.k = f.elem().degree();
  s.nx = f.grid_x().n_cells;
  s.ny = f.grid_y().n_cells;
  s.x_lo = f.grid_x().x_lo;
  s.x_hi = f.grid_x().x_hi;
  s.y_lo = f.grid_y().x_lo;
  s.y_hi = f.grid_y().x_hi;
  s.t = t;
  s.values.assign(f.values().begin(), f.values().end());
  return s;
}

Snapshot make_snapshot(const Field1D& u, double t, const std::string& mode) {
  Snapshot s;
  s.mode = mode;
  s.dims = 1;
  s.k = u.elem().degree();
  s.nx = u.n_cells();
  s.x_lo = u.grid().x_lo;
  s.x_hi = u.grid().x_hi;
  s.t = t;
  const int n = u.ndof();
  s.values.resize(static_cast<std::size_t>(s.nx) * n);
  for (int i = 0; i < s.nx; ++i) {
    u.elem().avg_to_nodal().apply(u.cell(i), std::span<double>(s.values).subspan(static_cast<std::size_t>(i) * n, n));
  }
  return s;
}

namespace {

std::size_t block_size(const Snapshot& s) {
  const std::size_t n = static_cast<std::size_t>(s.k) + 1;
  return s.dims == 1 ? n : n * n;
}

std::size_t block_count(const Snapshot& s) {
  return s.dims == 1 ? static_cast<std::size_t>(s.nx) : static_cast<std::size_t>(s.nx) * s.ny;
}

double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ConfigError("snapshot line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& s) {
  if (s.values.size() != block_size(s) * block_count(s)) throw ContractError("snapshot: value count mismatch");
  os << "# slsv snapshot\n";
  os << "mode " << s.mode << "\n";
  os << "dims " << s.dims << "\n";
  os << "k " << s.k << "\n";
  os << "nx " << s.nx << "\n";
  os << "ny " << s.ny << "\n";
  os << "x_lo " << format_double(s.x_lo) << "\n";
  os << "x_hi " << format_double(s.x_hi) << "\n";
  os << "y_lo " << format_double(s.y_lo) << "\n";
  os << "y_hi " << format_double(s.y_hi) << "\n";
  os << "t " << format_double(s.t) << "\n";
  os << "values\n";
  const std::size_t bs = block_size(s);
  for (std::size_t b = 0; b < block_count(s); ++b) {
    for (std::size_t q = 0; q < bs; ++q) os << (q ? " " : "") << format_double(s.values[b * bs + q]);
    os << "\n";
  }
}

Snapshot read_snapshot(std::istream& is) {
  Snapshot s;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> ConfigError {
    return ConfigError("snapshot line " + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(is, line) || line != "# slsv snapshot") {
    lineno = 1;
    throw fail("missing '# slsv snapshot' header");
  }
  lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line == "values") break;
    std::istringstream ls(line);
    std::string key, val;
    if (!(ls >> key >> val)) throw fail("expected 'key value'");
    if (key == "mode") s.mode = val;
    else if (key == "dims") s.dims = static_cast<int>(parse_double(val, lineno));
    else if (key == "k") s.k = static_cast<int>(parse_double(val, lineno));
    else if (key == "nx") s.nx = static_cast<int>(parse_double(val, lineno));
    else if (key == "ny") s.ny = static_cast<int>(parse_double(val, lineno));
    else if (key == "x_lo") s.x_lo = parse_double(val, lineno);
    else if (key == "x_hi") s.x_hi = parse_double(val, lineno);
    else if (key == "y_lo") s.y_lo = parse_double(val, lineno);
    else if (key == "y_hi") s.y_hi = parse_double(val, lineno);
    else if (key == "t") s.t = parse_double(val, lineno);
    else throw fail("unknown header key '" + key + "'");
  }
  if (line != "values") throw fail("missing 'values' line");
  if (s.dims != 1 && s.dims != 2) throw fail("dims must be 1 or 2");
  if (s.k < 0 || s.nx < 1 || (s.dims == 2 && s.ny < 1)) throw fail("bad mesh header");
  const std::size_t bs = block_size(s);
  const std::size_t nb = block_count(s);
  s.values.reserve(bs * nb);
  for (std::size_t b = 0; b < nb; ++b) {
    if (!std::getline(is, line)) throw fail("expected " + std::to_string(nb) + " value rows, got " + std::to_string(b));
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    std::size_t count = 0;
    while (ls >> tok) {
      s.values.push_back(parse_double(tok, lineno));
      ++count;
    }
    if (count != bs) throw fail("expected " + std::to_string(bs) + " values, got " + std::to_string(count));
  }
  return s;
}

void save_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  write_snapshot(os, s);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  return read_snapshot(is);
}

const char* const kTimeSeriesHeader =
    "t,l1,l2,energy,entropy,e_l2,e_linf,rel_dev_l1,rel_dev_l2,rel_dev_energy,rel_dev_entropy";

void write_record(std::ostream& os, const TimeSeriesRecord& r) {
  const double v[] = {r.t,    r.l1,         r.l2,         r.energy,         r.entropy,        r.e_l2,
                      r.e_linf, r.rel_dev_l1, r.rel_dev_l2, r.rel_dev_energy, r.rel_dev_entropy};
  for (std::size_t q = 0; q < std::size(v); ++q) os << (q ? "," : "") << format_double(v[q]);
  os << "\n";
}

std::vector<LadderRow> ladder_orders(std::vector<LadderRow> rows, bool key_is_cfl) {
  const LadderRow* prev = nullptr;
  for (LadderRow& r : rows) {
    r.l2_order.reset();
    r.linf_order.reset();
    if (!r.failure.empty()) {
      prev = nullptr;
      continue;
    }
    if (prev) {
      const double span = std::log(r.key / prev->key);
      const double sign = key_is_cfl ? -1.0 : 1.0;
      if (r.err.l2 > 0 && prev->err.l2 > 0) r.l2_order = sign * std::log(prev->err.l2 / r.err.l2) / span;
      if (r.err.linf > 0 && prev->err.linf > 0) r.linf_order = sign * std::log(prev->err.linf / r.err.linf) / span;
    }
    prev = &r;
  }
  return rows;
}

namespace {

std::string order_text(const std::optional<double>& o) {
  if (!o) return "";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", *o);
  return buf;
}

}  // namespace

void write_ladder_csv(std::ostream& os, const std::vector<LadderRow>& rows, const std::string& fixed_name,
                      double fixed_value, const std::string& key_name, bool header) {
  if (header) os << fixed_name << "," << key_name << ",l2,l2_order,linf,linf_order,failure\n";
  for (const LadderRow& r : rows) {
    os << format_double(fixed_value) << "," << format_double(r.key) << ",";
    if (r.failure.empty()) {
      os << format_double(r.err.l2) << "," << (r.l2_order ? format_double(*r.l2_order) : "") << ","
         << format_double(r.err.linf) << "," << (r.linf_order ? format_double(*r.linf_order) : "") << ",";
    } else {
      os << ",,,,\"" << r.failure << "\"";
    }
    os << "\n";
  }
}

void write_ladder_table(std::ostream& os, const std::vector<LadderRow>& rows, const std::string& key_name,
                        const std::string& title) {
  char buf[160];
  os << title << "\n";
  std::snprintf(buf, sizeof buf, "%8s  %12s  %6s  %12s  %6s\n", key_name.c_str(), "L2", "order", "Linf", "order");
  os << buf;
  for (const LadderRow& r : rows) {
    if (!r.failure.empty()) {
      std::snprintf(buf, sizeof buf, "%8g  failed: ", r.key);
      os << buf << r.failure << "\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%8g  %12.3e  %6s  %12.3e  %6s\n", r.key, r.err.l2, order_text(r.l2_order).c_str(),
                  r.err.linf, order_text(r.linf_order).c_str());
    os << buf;
  }
}

}  // namespace slsv
