#include "slsv/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <ostream>

#include "slsv/errors.hpp"

namespace slsv {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path prepare_dir(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) return {};
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("[output] dir: cannot create '" + cfg.output_dir + "': " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

json norms_json(const ErrorNorms& e) { return json{{"l2", e.l2}, {"linf", e.linf}}; }

json config_json(const RunConfig& cfg) {
  return json{{"mode", to_string(cfg.mode)}, {"scenario", cfg.scenario}, {"k", cfg.k},   {"nx", cfg.nx},
              {"nv", cfg.nv},                {"cfl", cfg.cfl},           {"t_end", cfg.t_end}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string clean_message(std::string s) {
  for (char& c : s)
    if (c == '"' || c == '\n') c = '\'';
  return s;
}

}  // namespace

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6g.txt", t);
  return buf;
}

VPRunOutput run_vp(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = prepare_dir(cfg);
  const bool write = !dir.empty();
  VPRunOutput out;

  std::ofstream csv;
  if (write) {
    csv.open(dir / "timeseries.csv");
    if (!csv) throw ConfigError("cannot write " + (dir / "timeseries.csv").string());
    csv << kTimeSeriesHeader << "\n";
  }

  RunOptions opts;
  opts.record_stride = cfg.record_stride;
  opts.snapshot_times = cfg.snapshot_times;
  opts.on_record = [&](const TimeSeriesRecord& r) {
    out.records.push_back(r);
    out.max_l1_dev = std::max(out.max_l1_dev, std::abs(r.rel_dev_l1));
    if (write) write_record(csv, r);
  };
  opts.on_snapshot = [&](const VPState& s) {
    out.snapshots.push_back(make_snapshot(s.f, s.t, "VP"));
    if (write) save_snapshot((dir / snapshot_name(s.t)).string(), out.snapshots.back());
  };
  bool first_step = true;
  double mass0 = 0.0;
  opts.on_step = [&](const StepReport& rep, const VPState& s) {
    ++out.steps;
    out.max_mass_dev = std::max(out.max_mass_dev, std::abs(s.f.mass() - mass0) / std::abs(mass0));
    if (rep.pp_failures > 0) ++out.pp_failure_steps;
    if (cfg.limiters.pp_enabled) {
      out.min_sampled = first_step ? rep.sampled_min : std::min(out.min_sampled, rep.sampled_min);
      first_step = false;
    }
    if (log && out.steps % 500 == 0) *log << "  step " << out.steps << "  t = " << s.t << "\n";
  };
  opts.on_warning = [&](const std::string& w) {
    if (out.warnings.size() < 50) out.warnings.push_back(w);
    if (log) *log << "warning: " << w << "\n";
  };
  opts.on_failure = [&](const VPState& s) {
    if (write) save_snapshot((dir / "snapshot_last_good.txt").string(), make_snapshot(s.f, s.t, "VP"));
  };

  const TimeControls tc{cfg.cfl, cfg.t_end, cfg.dt_cap};
  std::string failure;
  try {
    VPState init = init_scenario(cfg.scenario_spec(), cfg.nx, cfg.nv, cfg.k);
    mass0 = init.f.mass();
    const VPState end = run(std::move(init), tc, cfg.limiters, opts);
    out.t = end.t;
  } catch (const SolverError& e) {
    failure = e.what();
  }
  if (csv.is_open()) csv.flush();

  if (failure.empty()) {
    std::vector<double> ts, es;
    for (const TimeSeriesRecord& r : out.records) {
      ts.push_back(r.t);
      es.push_back(r.e_l2);
    }
    for (const FitWindow& w : cfg.fits) {
      FitOutcome fo{w, std::nullopt, ""};
      try {
        fo.fit = fit_rate(ts, es, w.peak_lo, w.peak_hi, w.mode, std::numbers::pi / 2, cfg.fit_include_initial);
      } catch (const DiagnosticError& e) {
        fo.error = e.what();
        if (log) *log << "warning: fit " << w.peak_lo << "-" << w.peak_hi << ": " << e.what() << "\n";
      }
      out.fits.push_back(fo);
    }
  }

  if (write) {
    json j;
    j["config"] = config_json(cfg);
    j["status"] = failure.empty() ? "ok" : "solver_failure";
    if (!failure.empty()) j["failure"] = failure;
    j["steps"] = out.steps;
    j["t"] = out.records.empty() ? 0.0 : out.records.back().t;
    j["wall_seconds"] = seconds_since(t0);
    j["max_rel_dev_l1"] = out.max_l1_dev;
    j["max_rel_mass_drift"] = out.max_mass_dev;
    if (cfg.limiters.pp_enabled) {
      j["min_sampled_f"] = out.min_sampled;
      j["pp_failure_steps"] = out.pp_failure_steps;
    }
    json fits = json::array();
    for (const FitOutcome& fo : out.fits) {
      json f{{"peak_lo", fo.window.peak_lo},
             {"peak_hi", fo.window.peak_hi},
             {"mode", fo.window.mode == FitMode::LeastSquares ? "lsq" : "endpoints"}};
      if (fo.fit) {
        f["gamma"] = fo.fit->gamma;
        f["residual"] = fo.fit->residual;
        json peaks = json::array();
        for (const Peak& p : fo.fit->peaks) peaks.push_back({{"t", p.t}, {"log_e_l2", p.log_value}});
        f["peaks"] = peaks;
      } else {
        f["error"] = fo.error;
      }
      fits.push_back(f);
    }
    j["fits"] = fits;
    j["fit_include_initial"] = cfg.fit_include_initial;
    j["warnings"] = out.warnings;
    write_json(dir / "summary.json", j);
  }
  if (!failure.empty()) throw SolverError(failure);
  return out;
}

TransportOutput run_transport_config(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = prepare_dir(cfg);
  const TransportProblem prob = cfg.transport_problem();
  TransportOutput out;
  const TransportRun tr{cfg.nx, cfg.nv, cfg.k, cfg.cfl, cfg.t_end, cfg.limiters};
  out.result = run_transport(prob, tr, cfg.snapshot_times, [&](const Snapshot& s) {
    out.snapshots.push_back(s);
    if (!dir.empty()) save_snapshot((dir / snapshot_name(s.t)).string(), s);
  });
  const TransportRunResult& r = out.result;
  if (log) {
    *log << cfg.scenario << ": " << r.steps << " steps to t = " << r.t;
    if (r.err) *log << ", L2 " << r.err->l2 << ", Linf " << r.err->linf;
    *log << ", max u " << r.u_max << "\n";
  }
  if (!dir.empty()) {
    json j;
    j["config"] = config_json(cfg);
    j["status"] = "ok";
    j["steps"] = r.steps;
    j["t"] = r.t;
    j["wall_seconds"] = seconds_since(t0);
    if (r.err) j["error"] = norms_json(*r.err);
    j["u_min"] = r.u_min;
    j["u_max"] = r.u_max;
    j["mass_rel_dev"] = r.mass0 != 0.0 ? (r.mass - r.mass0) / std::abs(r.mass0) : r.mass - r.mass0;
    write_json(dir / "summary.json", j);
  }
  return out;
}

ReversibilityResult run_reversibility_config(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = prepare_dir(cfg);
  const ReversibilityResult r =
      reversibility_test(cfg.scenario_spec(), cfg.nx, cfg.nv, cfg.k, cfg.cfl, cfg.t_end, cfg.limiters);
  if (log) *log << cfg.scenario << " reversibility: L2 " << r.err.l2 << ", Linf " << r.err.linf << "\n";
  if (!dir.empty()) {
    json j;
    j["config"] = config_json(cfg);
    j["status"] = "ok";
    j["steps"] = r.steps;
    j["wall_seconds"] = seconds_since(t0);
    j["error"] = norms_json(r.err);
    write_json(dir / "summary.json", j);
  }
  return r;
}

std::vector<ConvergenceTable> run_convergence(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const fs::path dir = prepare_dir(cfg);
  const bool vp = cfg.vp_scenario();
  std::optional<TransportProblem> prob;
  if (!vp) {
    prob = cfg.transport_problem();
    if (!prob->has_exact_at(cfg.t_end)) {
      throw ConfigError("[run] t_end: " + cfg.scenario + " has no exact solution at t = " + format_double(cfg.t_end));
    }
  }

  auto one = [&](int nx, int ny, double cfl) -> ErrorNorms {
    if (vp) return reversibility_test(cfg.scenario_spec(), nx, ny, cfg.k, cfl, cfg.t_end, cfg.limiters).err;
    const TransportRunResult r = run_transport(*prob, TransportRun{nx, ny, cfg.k, cfl, cfg.t_end, cfg.limiters});
    return *r.err;
  };
  auto row = [&](double key, int nx, int ny, double cfl) {
    LadderRow lr;
    lr.key = key;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      lr.err = one(nx, ny, cfl);
    } catch (const SolverError& e) {
      lr.failure = clean_message(e.what());
    } catch (const ContractError& e) {
      lr.failure = clean_message(e.what());
    }
    if (log) {
      *log << "  cfl " << cfl << "  N " << nx;
      if (lr.failure.empty()) *log << "  L2 " << lr.err.l2 << "  Linf " << lr.err.linf;
      else *log << "  failed: " << lr.failure;
      *log << "  (" << seconds_since(t0) << " s)\n";
    }
    return lr;
  };

  std::vector<ConvergenceTable> tables;
  if (cfg.vary_cfl) {
    ConvergenceTable t{"N", static_cast<double>(cfg.nx), "cfl", {}};
    for (double c : cfg.cfls) t.rows.push_back(row(c, cfg.nx, cfg.nv, c));
    t.rows = ladder_orders(std::move(t.rows), true);
    tables.push_back(std::move(t));
  } else {
    const std::vector<double> cfls = cfg.cfls.empty() ? std::vector<double>{cfg.cfl} : cfg.cfls;
    for (double c : cfls) {
      ConvergenceTable t{"cfl", c, "N", {}};
      for (int n : cfg.ladder) t.rows.push_back(row(n, n, n, c));
      t.rows = ladder_orders(std::move(t.rows), false);
      tables.push_back(std::move(t));
    }
  }

  if (!dir.empty()) {
    std::ofstream csv(dir / "convergence.csv");
    std::ofstream txt(dir / "convergence.txt");
    if (!csv || !txt) throw ConfigError("cannot write convergence tables in " + dir.string());
    bool header = true;
    for (const ConvergenceTable& t : tables) {
      write_ladder_csv(csv, t.rows, t.fixed_name, t.fixed_value, t.key_name, header);
      header = false;
      const std::string title = cfg.scenario + (vp ? " (reversibility)" : "") + ", k = " + std::to_string(cfg.k) +
                                ", " + t.fixed_name + " = " + short_num(t.fixed_value) +
                                ", T = " + short_num(cfg.t_end);
      write_ladder_table(txt, t.rows, t.key_name, title);
      txt << "\n";
    }
  }
  return tables;
}

}  // namespace slsv
