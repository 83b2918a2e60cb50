#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtqmc/randstates.hpp"

namespace dtqmc {

enum class InitialStateKind {
  kPaperInitial,     // (|0> - i|1>)/sqrt(2) on each coin register, queue at d_q/2
  kHalfFilledBasis,  // |00> coins, queue basis state at d_q/2
  kMaximallyMixed,
  kHsRandom,
  kExplicit,
};

struct InitialStateSpec {
  InitialStateKind kind = InitialStateKind::kHalfFilledBasis;
  ComplexMatrix matrix;  // kExplicit only
};

struct RunConfig {
  long t_max = 500;
  double eps = 1e-6;
  int state_checkpoint_every = 50;
};

struct OutputConfig {
  std::string directory;  // may be empty; resolved by the CLI layer
  std::vector<std::string> formats = {"csv", "json"};
};

struct ExperimentConfig {
  QueueDims dims{2, 2, 10};
  CoinSpec coin = CoinSpec::hadamard();
  bool classical = false;
  InitialStateSpec initial_state;
  std::uint64_t seed = 0;  // hs-random preset
  std::optional<RunConfig> run;
  std::optional<SampleConfig> montecarlo;
  OutputConfig output;

  // The exact configuration a run resolved to, embedded in output
  // metadata.
  nlohmann::json resolved() const;
};

// Parses and fully validates a configuration document. Everything that
// can be rejected is rejected here (field diagnostics in the message),
// so commands never fail on config grounds after outputs are opened.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

DensityMatrix resolve_initial_state(const ExperimentConfig& cfg);

struct SimulateResult {
  Trajectory trajectory;
  SemistabilityReport per_state;
  std::optional<SemistabilityReport> operator_level;  // when the dense gate allows
};

struct SpectrumResult {
  std::optional<SpectrumReport> full;
  std::optional<Complex> leading;  // power-iteration fallback
};

SimulateResult run_simulate(const ExperimentConfig& cfg);
SpectrumResult run_spectrum(const ExperimentConfig& cfg, bool leading_only);
MonteCarloSummary run_montecarlo(const ExperimentConfig& cfg);
StochasticMatrix run_classical_matrix(const ExperimentConfig& cfg);

}  // namespace dtqmc
