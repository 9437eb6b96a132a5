#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "slsv/config.hpp"
#include "slsv/errors.hpp"
#include "slsv/runner.hpp"

namespace {

int threads_from_env() {
  const char* env = std::getenv("SLSV_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw slsv::ConfigError(std::string("SLSV_THREADS: expected a positive integer, got '") + env + "'");
  return static_cast<int>(n);
}

int dispatch_run(const slsv::RunConfig& cfg) {
  using slsv::RunMode;
  switch (cfg.mode) {
    case RunMode::VP: {
      const slsv::VPRunOutput out = slsv::run_vp(cfg, &std::cerr);
      std::cout << cfg.scenario << ": " << out.steps << " steps to t = " << out.t << ", max mass drift "
                << out.max_mass_dev << "\n";
      for (const slsv::FitOutcome& fo : out.fits) {
        std::cout << "  rate over peaks " << fo.window.peak_lo << "-" << fo.window.peak_hi << ": ";
        if (fo.fit) std::cout << fo.fit->gamma << "\n";
        else std::cout << "n/a (" << fo.error << ")\n";
      }
      return 0;
    }
    case RunMode::Transport1D:
    case RunMode::Transport2D:
      slsv::run_transport_config(cfg, &std::cout);
      return 0;
    case RunMode::Reversibility:
      slsv::run_reversibility_config(cfg, &std::cout);
      return 0;
    case RunMode::Convergence:
      slsv::run_convergence(cfg, &std::cout);
      return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian spectral volume solver for transport and Vlasov-Poisson problems"};
  app.footer("\nExit codes: 0 ok, 1 solver failure, 2 configuration error.\n"
             "SLSV_THREADS caps the worker count when --threads is not given.\n\n" +
             slsv::config_reference());
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  std::string run_path, conv_path, preset;
  auto* run_cmd = app.add_subcommand("run", "run a configuration (any mode)");
  run_cmd->add_option("config", run_path, "config file")->required();
  auto* conv_cmd = app.add_subcommand("convergence", "run a convergence ladder (mode = Convergence)");
  conv_cmd->add_option("config", conv_path, "config file")->required();
  auto* print_cmd = app.add_subcommand("print-config", "print the effective config of a preset");
  print_cmd->add_option("preset", preset, "scenario or transport preset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (threads == 0) threads = threads_from_env();
    if (threads > 0) omp_set_num_threads(threads);

    if (*print_cmd) {
      std::cout << slsv::emit_config(slsv::preset_config(preset));
      return 0;
    }
    if (*conv_cmd) {
      const slsv::RunConfig cfg = slsv::parse_config(conv_path);
      if (cfg.mode != slsv::RunMode::Convergence) {
        throw slsv::ConfigError("[run] mode: 'convergence' needs mode = Convergence, got " + slsv::to_string(cfg.mode));
      }
      return dispatch_run(cfg);
    }
    return dispatch_run(slsv::parse_config(run_path));
  } catch (const slsv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const slsv::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 1;
  } catch (const slsv::ContractError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 1;
  }
}
