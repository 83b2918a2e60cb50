// Command-line front end: simulate | spectrum | montecarlo | classical-matrix.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "dtqmc/outputs.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> formats;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "experiment configuration JSON")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--format", args.formats, "output formats (csv, json, svg)");
  cmd->add_option("--seed", args.seed, "override the configured seed");
  cmd->add_option("--threads", args.threads, "worker threads for montecarlo");
}

std::string resolve_out_dir(const CommonArgs& args, const dtqmc::ExperimentConfig& cfg) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (!cfg.output.directory.empty()) return cfg.output.directory;
  if (const char* env = std::getenv("DTQMC_OUT_DIR"); env && *env) return env;
  return "out";
}

dtqmc::ExperimentConfig load_config(const CommonArgs& args) {
  dtqmc::ExperimentConfig cfg = dtqmc::load_experiment_config(args.config_path);
  if (args.seed) {
    cfg.seed = *args.seed;
    if (cfg.montecarlo) cfg.montecarlo->seed = *args.seed;
  }
  if (args.threads > 0 && cfg.montecarlo) cfg.montecarlo->n_threads = args.threads;
  if (!args.formats.empty()) {
    for (const auto& f : args.formats) {
      if (f != "csv" && f != "json" && f != "svg") {
        throw dtqmc::ConfigError("--format: unknown format '" + f + "'");
      }
    }
    cfg.output.formats = args.formats;
  }
  return cfg;
}

void print_written(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete-time quantum Markov chain queue simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args, spec_args, mc_args, cm_args;
  bool leading_only = false;

  CLI::App* sim = app.add_subcommand("simulate", "evolve a single initial state");
  add_common(sim, sim_args);
  CLI::App* spec = app.add_subcommand("spectrum", "superoperator spectrum of the step channel");
  add_common(spec, spec_args);
  spec->add_flag("--leading-only", leading_only,
                 "power-iteration leading eigenvalue (no dense gate)");
  CLI::App* mc = app.add_subcommand("montecarlo", "mean distribution over random initial states");
  add_common(mc, mc_args);
  CLI::App* cm = app.add_subcommand("classical-matrix", "stochastic matrix of the dephased coin");
  add_common(cm, cm_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto cfg = load_config(sim_args);
      const auto result = dtqmc::run_simulate(cfg);
      print_written(dtqmc::write_simulate_outputs(result, cfg, resolve_out_dir(sim_args, cfg)));
      std::cout << "per-state: " << (result.per_state.converged ? "converged" : "not converged")
                << " (t_stop " << result.per_state.t_stop << ", final norm "
                << dtqmc::format_double(result.per_state.final_norm) << ")\n";
      if (result.operator_level) {
        std::cout << "operator-level: "
                  << (result.operator_level->converged ? "converged" : "not converged")
                  << " (final norm "
                  << dtqmc::format_double(result.operator_level->final_norm) << ")\n";
      }
    } else if (spec->parsed()) {
      const auto cfg = load_config(spec_args);
      const auto result = dtqmc::run_spectrum(cfg, leading_only);
      print_written(dtqmc::write_spectrum_outputs(result, cfg, resolve_out_dir(spec_args, cfg)));
      if (result.full) {
        std::cout << "classification: "
                  << (result.full->classification ==
                              dtqmc::SpectrumReport::Case::kUniqueUnit
                          ? "case1 (unique unit eigenvalue)"
                          : "case2 (degenerate or peripheral spectrum)")
                  << ", unit-modulus count " << result.full->n_unit_modulus << "\n";
      } else if (result.leading) {
        std::cout << "leading eigenvalue estimate: modulus "
                  << dtqmc::format_double(std::abs(*result.leading)) << "\n";
      }
    } else if (mc->parsed()) {
      const auto cfg = load_config(mc_args);
      const auto summary = dtqmc::run_montecarlo(cfg);
      print_written(dtqmc::write_montecarlo_outputs(summary, cfg, resolve_out_dir(mc_args, cfg)));
      std::cout << summary.n_converged << "/" << summary.n_samples
                << " samples converged (max t_stop " << summary.max_t_stop << ")\n";
      if (summary.n_converged < summary.n_samples) {
        std::cerr << "warning: " << (summary.n_samples - summary.n_converged)
                  << " samples excluded (no convergence within t_max)\n";
      }
    } else if (cm->parsed()) {
      const auto cfg = load_config(cm_args);
      const auto m = dtqmc::run_classical_matrix(cfg);
      print_written(dtqmc::write_classical_matrix_outputs(m, cfg, resolve_out_dir(cm_args, cfg)));
      std::cout << "stochasticity verified (column sum error "
                << dtqmc::format_double(m.column_sum_error) << ", TP error "
                << dtqmc::format_double(m.tp_error) << ")\n";
    }
  } catch (const dtqmc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dtqmc::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const dtqmc::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
