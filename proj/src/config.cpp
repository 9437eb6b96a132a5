#include "slsv/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "slsv/errors.hpp"
#include "slsv/io.hpp"

namespace slsv {

namespace pt = boost::property_tree;

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"mode", "k", "nx", "nv", "ny", "cfl", "t_end", "dt_cap"}},
      {"scenario", {"name", "alpha", "kmode", "u_drift", "v_th", "x_lo", "x_hi", "v_max"}},
      {"limiters", {"pp", "weno", "tvb_M", "weno_eps", "weno_power", "linear_weights"}},
      {"output", {"dir", "record_stride", "snapshot_times"}},
      {"fit", {"windows", "include_initial"}},
      {"convergence", {"ladder", "cfls", "vary"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  [[nodiscard]] std::optional<std::string> raw(const std::string& sec, const std::string& key) const {
    const auto s = tree_.get_child_optional(pt::ptree::path_type(sec, '\0'));
    if (!s) return std::nullopt;
    const auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  [[nodiscard]] std::string required(const std::string& sec, const std::string& key) const {
    auto v = raw(sec, key);
    if (!v) throw ConfigError("missing required key [" + sec + "] " + key);
    return *v;
  }

  static double to_double(const std::string& sec, const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) bad(sec, key, "a number", v);
    return out;
  }

  static int to_int(const std::string& sec, const std::string& key, const std::string& v) {
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) bad(sec, key, "an integer", v);
    return out;
  }

  static bool to_bool(const std::string& sec, const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    bad(sec, key, "true or false", v);
    return false;
  }

  void read(const std::string& sec, const std::string& key, double& out) const {
    if (auto v = raw(sec, key)) out = to_double(sec, key, *v);
  }
  void read(const std::string& sec, const std::string& key, int& out) const {
    if (auto v = raw(sec, key)) out = to_int(sec, key, *v);
  }
  void read(const std::string& sec, const std::string& key, bool& out) const {
    if (auto v = raw(sec, key)) out = to_bool(sec, key, *v);
  }

  [[noreturn]] static void bad(const std::string& sec, const std::string& key, const std::string& want,
                               const std::string& got) {
    throw ConfigError("[" + sec + "] " + key + ": expected " + want + ", got '" + got + "'");
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      throw ConfigError("unknown key '" + name + "' (keys must sit inside a [section])");
    }
    const auto sec = known_keys().find(name);
    if (sec == known_keys().end()) throw ConfigError("unknown section [" + name + "]");
    for (const auto& kv : child) {
      if (!sec->second.count(kv.first)) throw ConfigError("unknown key '" + kv.first + "' in [" + name + "]");
    }
  }
}

RunMode mode_from_string(const std::string& s) {
  for (RunMode m : {RunMode::Transport1D, RunMode::Transport2D, RunMode::VP, RunMode::Convergence,
                    RunMode::Reversibility}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("[run] mode: unknown mode '" + s +
                    "' (Transport1D, Transport2D, VP, Convergence, Reversibility)");
}

std::string fit_mode_name(FitMode m) { return m == FitMode::LeastSquares ? "lsq" : "endpoints"; }

FitWindow parse_window(const std::string& item) {
  const auto fail = [&]() -> ConfigError {
    return ConfigError("[fit] windows: expected 'LO-HI lsq|endpoints', got '" + item + "'");
  };
  std::istringstream is(item);
  std::string range, mode;
  if (!(is >> range >> mode)) throw fail();
  std::string extra;
  if (is >> extra) throw fail();
  const auto dash = range.find('-');
  if (dash == std::string::npos) throw fail();
  FitWindow w;
  try {
    w.peak_lo = Reader::to_int("fit", "windows", range.substr(0, dash));
    w.peak_hi = Reader::to_int("fit", "windows", range.substr(dash + 1));
  } catch (const ConfigError&) {
    throw fail();
  }
  if (mode == "lsq") w.mode = FitMode::LeastSquares;
  else if (mode == "endpoints") w.mode = FitMode::Endpoints;
  else throw fail();
  return w;
}

void load_scenario_preset(RunConfig& c) {
  const ScenarioSpec s = ScenarioSpec::preset(scenario_from_string(c.scenario));
  c.alpha = s.alpha;
  c.kmode = s.kmode;
  c.u_drift = s.u_drift;
  c.v_th = s.v_th;
  c.x_lo = s.x_lo;
  c.x_hi = s.x_hi;
  c.v_max = s.v_max;
}

bool is_vp_name(const std::string& name) {
  return name == "WeakLandau" || name == "StrongLandau" || name == "TwoStream1" || name == "TwoStream2";
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t q = 0; q < v.size(); ++q) {
    if (q) out += ", ";
    if constexpr (std::is_same_v<T, double>) out += format_shortest(v[q]);
    else out += std::to_string(v[q]);
  }
  return out;
}

}  // namespace

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Transport1D: return "Transport1D";
    case RunMode::Transport2D: return "Transport2D";
    case RunMode::VP: return "VP";
    case RunMode::Convergence: return "Convergence";
    case RunMode::Reversibility: return "Reversibility";
  }
  return "?";
}

bool RunConfig::vp_scenario() const { return is_vp_name(scenario); }

ScenarioSpec RunConfig::scenario_spec() const {
  if (!vp_scenario()) throw ConfigError("[scenario] name: '" + scenario + "' is not a Vlasov-Poisson scenario");
  ScenarioSpec s = ScenarioSpec::preset(scenario_from_string(scenario));
  s.alpha = alpha;
  s.kmode = kmode;
  s.u_drift = u_drift;
  s.v_th = v_th;
  s.x_lo = x_lo;
  s.x_hi = x_hi;
  s.v_max = v_max;
  return s;
}

TransportProblem RunConfig::transport_problem() const {
  const auto p = transport_from_string(scenario);
  if (!p) throw ConfigError("[scenario] name: '" + scenario + "' is not a transport preset");
  return TransportProblem::preset_problem(*p);
}

void RunConfig::validate() const {
  if (!vp_scenario() && !transport_from_string(scenario)) {
    throw ConfigError("[scenario] name: unknown preset '" + scenario + "'");
  }
  if (k < 1 || k > 6) throw ConfigError("[run] k: degree must be in [1, 6], got " + std::to_string(k));
  if (!(cfl > 0.0)) throw ConfigError("[run] cfl: must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("[run] t_end: must be >= 0");
  if (dt_cap && !(*dt_cap > 0.0)) throw ConfigError("[run] dt_cap: must be positive");
  if (record_stride < 1) throw ConfigError("[output] record_stride: must be >= 1");
  for (double t : snapshot_times)
    if (!(t >= 0.0)) throw ConfigError("[output] snapshot_times: times must be >= 0");
  for (const FitWindow& w : fits)
    if (w.peak_lo < 1 || w.peak_hi < w.peak_lo) throw ConfigError("[fit] windows: need 1 <= LO <= HI");
  try {
    limiters.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[limiters] ") + e.what());
  }

  const bool vp = vp_scenario();
  const int dims = vp ? 2 : transport_problem().dims;
  const bool needs_mesh = mode != RunMode::Convergence || vary_cfl;
  if (needs_mesh && nx < 1) throw ConfigError("missing required key [run] nx");
  if (needs_mesh && dims == 2 && nv < 1) {
    throw ConfigError(std::string("missing required key [run] ") + (vp ? "nv" : "ny"));
  }
  switch (mode) {
    case RunMode::Transport1D:
      if (vp || dims != 1) throw ConfigError("[run] mode: Transport1D needs a 1D transport preset");
      break;
    case RunMode::Transport2D:
      if (vp || dims != 2) throw ConfigError("[run] mode: Transport2D needs a 2D transport preset");
      break;
    case RunMode::VP:
    case RunMode::Reversibility:
      if (!vp) throw ConfigError("[run] mode: " + to_string(mode) + " needs a Vlasov-Poisson scenario");
      break;
    case RunMode::Convergence:
      if (vary_cfl) {
        if (cfls.size() < 2) throw ConfigError("[convergence] cfls: a CFL ladder needs at least two values");
      } else if (ladder.empty()) {
        throw ConfigError("missing required key [convergence] ladder");
      }
      for (std::size_t q = 0; q < ladder.size(); ++q) {
        if (ladder[q] < 1 || (q && ladder[q] <= ladder[q - 1])) {
          throw ConfigError("[convergence] ladder: resolutions must be positive and increasing");
        }
      }
      for (double c : cfls)
        if (!(c > 0.0)) throw ConfigError("[convergence] cfls: values must be positive");
      break;
  }
  if (vp) scenario_spec().validate();
}

RunConfig parse_config_text(const std::string& text) {
  // '#' comments are accepted alongside ';'.
  std::string cleaned;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      const std::string t = trim(line);
      cleaned += (!t.empty() && t[0] == '#') ? std::string() : line;
      cleaned += "\n";
    }
  }
  pt::ptree tree;
  try {
    std::istringstream is(cleaned);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  check_keys(tree);
  const Reader r(tree);

  RunConfig c;
  c.mode = mode_from_string(r.required("run", "mode"));
  c.scenario = r.required("scenario", "name");
  const bool vp = is_vp_name(c.scenario);
  if (vp) {
    load_scenario_preset(c);
  } else if (!transport_from_string(c.scenario)) {
    throw ConfigError("[scenario] name: unknown preset '" + c.scenario + "'");
  }
  for (const char* key : {"alpha", "kmode", "u_drift", "v_th", "x_lo", "x_hi", "v_max"}) {
    if (!vp && r.raw("scenario", key)) {
      throw ConfigError(std::string("[scenario] ") + key + ": only Vlasov-Poisson scenarios take this key");
    }
  }
  r.read("scenario", "alpha", c.alpha);
  r.read("scenario", "kmode", c.kmode);
  r.read("scenario", "u_drift", c.u_drift);
  r.read("scenario", "v_th", c.v_th);
  r.read("scenario", "x_lo", c.x_lo);
  r.read("scenario", "x_hi", c.x_hi);
  r.read("scenario", "v_max", c.v_max);

  c.k = Reader::to_int("run", "k", r.required("run", "k"));
  const bool ladder_mode = c.mode == RunMode::Convergence;
  if (!ladder_mode) c.nx = Reader::to_int("run", "nx", r.required("run", "nx"));
  else r.read("run", "nx", c.nx);
  if (r.raw("run", "nv") && r.raw("run", "ny")) throw ConfigError("[run] give either nv or ny, not both");
  if (r.raw("run", "ny") && vp) throw ConfigError("[run] ny: Vlasov-Poisson runs take nv");
  if (r.raw("run", "nv") && !vp) throw ConfigError("[run] nv: transport runs take ny");
  r.read("run", vp ? "nv" : "ny", c.nv);
  if (!vp && c.nv == 0 && c.nx > 0 && c.transport_problem().dims == 2) c.nv = c.nx;
  c.cfl = Reader::to_double("run", "cfl", r.required("run", "cfl"));
  c.t_end = Reader::to_double("run", "t_end", r.required("run", "t_end"));
  if (auto v = r.raw("run", "dt_cap")) c.dt_cap = Reader::to_double("run", "dt_cap", *v);

  r.read("limiters", "pp", c.limiters.pp_enabled);
  r.read("limiters", "weno", c.limiters.weno_enabled);
  r.read("limiters", "tvb_M", c.limiters.tvb_M);
  r.read("limiters", "weno_eps", c.limiters.weno_eps);
  r.read("limiters", "weno_power", c.limiters.weno_power);
  if (auto v = r.raw("limiters", "linear_weights")) {
    const auto items = split(*v, ',');
    if (items.size() != 3) Reader::bad("limiters", "linear_weights", "three numbers", *v);
    for (int q = 0; q < 3; ++q) c.limiters.linear_weights[q] = Reader::to_double("limiters", "linear_weights", items[q]);
  }

  if (auto v = r.raw("output", "dir")) c.output_dir = *v;
  r.read("output", "record_stride", c.record_stride);
  if (auto v = r.raw("output", "snapshot_times")) {
    for (const auto& item : split(*v, ',')) c.snapshot_times.push_back(Reader::to_double("output", "snapshot_times", item));
  }
  if (auto v = r.raw("fit", "windows")) {
    for (const auto& item : split(*v, ',')) c.fits.push_back(parse_window(item));
  }
  r.read("fit", "include_initial", c.fit_include_initial);
  if (auto v = r.raw("convergence", "ladder")) {
    for (const auto& item : split(*v, ',')) c.ladder.push_back(Reader::to_int("convergence", "ladder", item));
  }
  if (auto v = r.raw("convergence", "cfls")) {
    for (const auto& item : split(*v, ',')) c.cfls.push_back(Reader::to_double("convergence", "cfls", item));
  }
  if (auto v = r.raw("convergence", "vary")) {
    if (*v == "cfl") c.vary_cfl = true;
    else if (*v != "resolution") Reader::bad("convergence", "vary", "resolution or cfl", *v);
  }
  if (!ladder_mode && (r.raw("convergence", "ladder") || r.raw("convergence", "cfls") || r.raw("convergence", "vary"))) {
    throw ConfigError("[convergence] keys only apply to mode = Convergence");
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  const bool vp = c.vp_scenario();
  const int dims = vp ? 2 : c.transport_problem().dims;
  os << "[run]\n";
  os << "mode = " << to_string(c.mode) << "\n";
  os << "k = " << c.k << "\n";
  if (c.nx > 0) os << "nx = " << c.nx << "\n";
  if (dims == 2 && c.nv > 0) os << (vp ? "nv = " : "ny = ") << c.nv << "\n";
  os << "cfl = " << format_shortest(c.cfl) << "\n";
  os << "t_end = " << format_shortest(c.t_end) << "\n";
  if (c.dt_cap) os << "dt_cap = " << format_shortest(*c.dt_cap) << "\n";

  os << "\n[scenario]\n";
  os << "name = " << c.scenario << "\n";
  if (vp) {
    os << "alpha = " << format_shortest(c.alpha) << "\n";
    os << "kmode = " << format_shortest(c.kmode) << "\n";
    os << "u_drift = " << format_shortest(c.u_drift) << "\n";
    os << "v_th = " << format_shortest(c.v_th) << "\n";
    os << "x_lo = " << format_shortest(c.x_lo) << "\n";
    os << "x_hi = " << format_shortest(c.x_hi) << "\n";
    os << "v_max = " << format_shortest(c.v_max) << "\n";
  }

  const LimiterConfig& L = c.limiters;
  os << "\n[limiters]\n";
  os << "pp = " << (L.pp_enabled ? "true" : "false") << "\n";
  os << "weno = " << (L.weno_enabled ? "true" : "false") << "\n";
  os << "tvb_M = " << format_shortest(L.tvb_M) << "\n";
  os << "weno_eps = " << format_shortest(L.weno_eps) << "\n";
  os << "weno_power = " << L.weno_power << "\n";
  os << "linear_weights = " << join(std::vector<double>(L.linear_weights.begin(), L.linear_weights.end())) << "\n";

  os << "\n[output]\n";
  os << "dir = " << c.output_dir << "\n";
  os << "record_stride = " << c.record_stride << "\n";
  if (!c.snapshot_times.empty()) os << "snapshot_times = " << join(c.snapshot_times) << "\n";

  if (!c.fits.empty()) {
    os << "\n[fit]\nwindows = ";
    for (std::size_t q = 0; q < c.fits.size(); ++q) {
      os << (q ? ", " : "") << c.fits[q].peak_lo << "-" << c.fits[q].peak_hi << " " << fit_mode_name(c.fits[q].mode);
    }
    os << "\n";
    if (c.fit_include_initial) os << "include_initial = true\n";
  }
  if (c.mode == RunMode::Convergence) {
    os << "\n[convergence]\n";
    if (!c.ladder.empty()) os << "ladder = " << join(c.ladder) << "\n";
    if (!c.cfls.empty()) os << "cfls = " << join(c.cfls) << "\n";
    os << "vary = " << (c.vary_cfl ? "cfl" : "resolution") << "\n";
  }
  return os.str();
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.scenario = name;
  if (is_vp_name(name)) {
    load_scenario_preset(c);
    c.mode = RunMode::VP;
    c.k = 2;
    c.nx = c.nv = 160;
    c.cfl = 1.0;
    c.limiters.pp_enabled = true;
    c.output_dir = "out/" + name;
    if (name == "WeakLandau") {
      c.t_end = 30.0;
      c.fits = {{1, 8, FitMode::LeastSquares}};
    } else if (name == "StrongLandau") {
      c.t_end = 50.0;
      c.snapshot_times = {40.0};
      c.fits = {{2, 3, FitMode::Endpoints}, {10, 16, FitMode::Endpoints}};
      c.fit_include_initial = true;
    } else if (name == "TwoStream1") {
      c.t_end = 53.0;
      c.snapshot_times = {53.0};
    } else {
      c.t_end = 70.0;
      c.snapshot_times = {70.0};
    }
    c.validate();
    return c;
  }
  const auto p = transport_from_string(name);
  if (!p) throw ConfigError("unknown preset '" + name + "'");
  c.output_dir = "out/" + name;
  c.k = 2;
  switch (*p) {
    case TransportPreset::Linear1D:
      c.mode = RunMode::Transport1D;
      c.nx = 80;
      c.cfl = 0.4;
      c.t_end = 20.0;
      break;
    case TransportPreset::Linear2D:
      c.mode = RunMode::Transport2D;
      c.nx = c.nv = 80;
      c.cfl = 0.5;
      c.t_end = kPi;
      break;
    case TransportPreset::RigidBody:
    case TransportPreset::RigidBodyAniso:
      c.mode = RunMode::Transport2D;
      c.nx = c.nv = 80;
      c.cfl = 0.5;
      c.t_end = 2 * kPi;
      break;
    case TransportPreset::Swirling:
      c.mode = RunMode::Transport2D;
      c.nx = c.nv = 80;
      c.cfl = 0.5;
      c.t_end = 1.5;
      break;
    case TransportPreset::RigidCone:
      c.mode = RunMode::Transport2D;
      c.nx = c.nv = 160;
      c.cfl = 2.2;
      c.t_end = 12 * kPi;
      c.limiters.weno_enabled = true;
      c.snapshot_times = {c.t_end};
      break;
    case TransportPreset::SwirlCone:
      c.mode = RunMode::Transport2D;
      c.nx = c.nv = 160;
      c.cfl = 2.2;
      c.t_end = 1.5;
      c.limiters.weno_enabled = true;
      c.snapshot_times = {0.75, 1.5};
      break;
  }
  c.validate();
  return c;
}

std::string config_reference() {
  return R"(Config file keys (INI sections; '#' or ';' starts a comment):
  [run]
    mode            Transport1D | Transport2D | VP | Convergence | Reversibility   (required)
    k               polynomial degree 1..6                                           (required)
    nx              x cells (optional for resolution ladders)                        (required)
    nv              velocity cells for VP scenarios                                  (required for VP)
    ny              y cells for 2D transport                                         (default: nx)
    cfl             VP: dt = cfl / (v_max/dx + max|E|/dv); transport: dt = cfl / max(|a|/hx + |b|/hy)  (required)
    t_end           final time; Reversibility: forward time T                        (required)
    dt_cap          upper bound on dt                                                (default: none)
  [scenario]
    name            WeakLandau | StrongLandau | TwoStream1 | TwoStream2 |
                    Linear1D | Linear2D | RigidBody | RigidBodyAniso | RigidCone |
                    Swirling | SwirlCone                                             (required)
    alpha, kmode, u_drift, v_th, x_lo, x_hi, v_max
                    VP scenario parameters                                           (default: preset)
  [limiters]
    pp              positivity-preserving limiter                                   (default: false)
    weno            WENO limiter on TVB-troubled cells                               (default: false)
    tvb_M           TVB constant                                                     (default: 1)
    weno_eps        WENO epsilon                                                     (default: 1e-6)
    weno_power      WENO weight exponent                                             (default: 2)
    linear_weights  centre, left, right                                              (default: 0.998, 0.001, 0.001)
  [output]
    dir             output directory                                                 (default: out)
    record_stride   time-series row every N steps                                    (default: 1)
    snapshot_times  comma-separated times                                            (default: none)
  [fit]
    windows         E-field rate fits, e.g. "1-8 lsq, 10-16 endpoints"               (default: none)
    include_initial count the t = 0 value as peak 1 when E starts decreasing      (default: false)
  [convergence]
    ladder          resolutions N (N x N in 2D)                                      (required for resolution ladders)
    cfls            CFL numbers; one table per value, or the ladder itself           (default: run.cfl)
    vary            resolution | cfl                                                 (default: resolution)
)";
}

}  // namespace slsv
