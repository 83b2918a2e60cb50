#include "dtqmc/config.hpp"

#include <fstream>

#include "dtqmc/json_io.hpp"

namespace dtqmc {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& field, const std::string& what) {
  throw ConfigError("config: field '" + field + "': " + what);
}

template <typename T>
T require(const json& j, const std::string& field) {
  if (!j.contains(field)) config_fail(field, "missing");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    config_fail(field, e.what());
  }
}

template <typename T>
T get_or(const json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    config_fail(field, e.what());
  }
}

QueueDims parse_dims(const json& doc) {
  if (!doc.contains("dims")) config_fail("dims", "missing");
  const json& d = doc.at("dims");
  try {
    return QueueDims(require<int>(d, "d_i"), require<int>(d, "d_o"),
                     require<int>(d, "d_q"));
  } catch (const InvalidDimsError& e) {
    config_fail("dims", e.what());
  }
}

CoinSpec parse_coin(const json& doc, const QueueDims& dims) {
  if (!doc.contains("coin")) config_fail("coin", "missing");
  const json& c = doc.at("coin");
  const auto kind = require<std::string>(c, "kind");
  const auto app_name = get_or<std::string>(c, "application", "per_register");
  CoinApplication app;
  if (app_name == "per_register") {
    app = CoinApplication::kPerRegister;
  } else if (app_name == "joint") {
    app = CoinApplication::kJoint;
  } else {
    config_fail("coin.application", "expected 'per_register' or 'joint'");
  }

  try {
    CoinSpec spec = [&]() -> CoinSpec {
      if (kind == "hadamard") return CoinSpec::hadamard();
      if (kind == "walsh_hadamard") return CoinSpec::walsh_hadamard(require<int>(c, "n"));
      if (kind == "grover") return CoinSpec::grover(require<int>(c, "d"));
      if (kind == "dft") return CoinSpec::dft(require<int>(c, "d"));
      if (kind == "identity") {
        // Sized to the joint coin space so it works for any registers.
        return CoinSpec::custom_unitary(
            ComplexMatrix::Identity(dims.coin_dim(), dims.coin_dim()),
            CoinApplication::kJoint);
      }
      if (kind == "custom_unitary") {
        if (!c.contains("matrix")) config_fail("coin.matrix", "missing");
        return CoinSpec::custom_unitary(matrix_from_json(c.at("matrix")), app);
      }
      if (kind == "custom_kraus") {
        if (!c.contains("kraus_ops")) config_fail("coin.kraus_ops", "missing");
        std::vector<ComplexMatrix> ops;
        for (const auto& m : c.at("kraus_ops")) ops.push_back(matrix_from_json(m));
        return CoinSpec::custom_kraus(std::move(ops));
      }
      config_fail("coin.kind", "unknown kind '" + kind + "'");
    }();
    // Reject dimension mismatches now, not at channel-build time.
    (void)spec.coin_space_kraus(dims);
    return spec;
  } catch (const Error& e) {
    config_fail("coin", e.what());
  }
}

InitialStateSpec parse_initial_state(const json& doc, const QueueDims& dims) {
  InitialStateSpec spec;
  if (!doc.contains("initial_state")) config_fail("initial_state", "missing");
  const json& s = doc.at("initial_state");
  if (s.contains("matrix")) {
    spec.kind = InitialStateKind::kExplicit;
    try {
      spec.matrix = matrix_from_json(s.at("matrix"));
      DensityMatrix probe(spec.matrix);  // rejects invalid states
      if (probe.dim() != dims.total_dim()) {
        config_fail("initial_state.matrix", "dimension does not match dims");
      }
    } catch (const Error& e) {
      config_fail("initial_state.matrix", e.what());
    }
    return spec;
  }
  const auto preset = require<std::string>(s, "preset");
  if (preset == "paper-initial") {
    spec.kind = InitialStateKind::kPaperInitial;
    if (dims.d_i != 2 || dims.d_o != 2) {
      config_fail("initial_state", "paper-initial requires d_i = d_o = 2");
    }
  } else if (preset == "half-filled-basis") {
    spec.kind = InitialStateKind::kHalfFilledBasis;
  } else if (preset == "maximally-mixed") {
    spec.kind = InitialStateKind::kMaximallyMixed;
  } else if (preset == "hs-random") {
    spec.kind = InitialStateKind::kHsRandom;
  } else {
    config_fail("initial_state.preset", "unknown preset '" + preset + "'");
  }
  return spec;
}

SampleConfig parse_montecarlo(const json& m) {
  SampleConfig cfg;
  cfg.n_samples = require<long>(m, "n_samples");
  cfg.seed = get_or<std::uint64_t>(m, "seed", 0);
  cfg.eps = get_or<double>(m, "eps", 1e-6);
  cfg.t_max = get_or<long>(m, "t_max", 10000);
  cfg.queue_basis_index = get_or<int>(m, "queue_basis_index", -1);
  const auto kind = get_or<std::string>(m, "state_kind", "full-system");
  if (kind == "full-system") {
    cfg.state_kind = StateKind::kFullSystem;
  } else if (kind == "queue-basis-product") {
    cfg.state_kind = StateKind::kQueueBasisProduct;
  } else {
    config_fail("montecarlo.state_kind",
                "expected 'full-system' or 'queue-basis-product'");
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    config_fail("montecarlo", e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  ExperimentConfig cfg;
  cfg.dims = parse_dims(doc);
  cfg.coin = parse_coin(doc, cfg.dims);

  const auto mode = get_or<std::string>(doc, "mode", "quantum");
  if (mode == "quantum") {
    cfg.classical = false;
  } else if (mode == "classical") {
    cfg.classical = true;
  } else {
    config_fail("mode", "expected 'quantum' or 'classical'");
  }

  cfg.initial_state = parse_initial_state(doc, cfg.dims);
  cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);

  const bool has_run = doc.contains("run");
  const bool has_mc = doc.contains("montecarlo");
  if (has_run == has_mc) {
    throw ConfigError(
        "config: exactly one of 'run' and 'montecarlo' must be present");
  }
  if (has_run) {
    const json& r = doc.at("run");
    RunConfig run;
    run.t_max = require<long>(r, "t_max");
    run.eps = get_or<double>(r, "eps", 1e-6);
    run.state_checkpoint_every = get_or<int>(r, "state_checkpoint_every", 50);
    if (run.t_max < 0) config_fail("run.t_max", "must be >= 0");
    if (run.eps <= 0) config_fail("run.eps", "must be > 0");
    if (run.state_checkpoint_every < 0) {
      config_fail("run.state_checkpoint_every", "must be >= 0");
    }
    cfg.run = run;
  } else {
    cfg.montecarlo = parse_montecarlo(doc.at("montecarlo"));
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    cfg.output.directory = get_or<std::string>(o, "directory", "");
    if (o.contains("formats")) {
      cfg.output.formats.clear();
      for (const auto& f : o.at("formats")) {
        const auto name = f.get<std::string>();
        if (name != "csv" && name != "json" && name != "svg") {
          config_fail("output.formats", "unknown format '" + name + "'");
        }
        cfg.output.formats.push_back(name);
      }
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config: JSON parse failure in '" + path + "': " + e.what());
  }
  return parse_experiment_config(doc);
}

json ExperimentConfig::resolved() const {
  json doc;
  doc["dims"] = {{"d_i", dims.d_i}, {"d_o", dims.d_o}, {"d_q", dims.d_q}};
  doc["coin"] = coin.name();
  doc["mode"] = classical ? "classical" : "quantum";
  switch (initial_state.kind) {
    case InitialStateKind::kPaperInitial: doc["initial_state"] = "paper-initial"; break;
    case InitialStateKind::kHalfFilledBasis: doc["initial_state"] = "half-filled-basis"; break;
    case InitialStateKind::kMaximallyMixed: doc["initial_state"] = "maximally-mixed"; break;
    case InitialStateKind::kHsRandom: doc["initial_state"] = "hs-random"; break;
    case InitialStateKind::kExplicit: doc["initial_state"] = "explicit-matrix"; break;
  }
  doc["seed"] = seed;
  if (run) {
    doc["run"] = {{"t_max", run->t_max},
                  {"eps", run->eps},
                  {"state_checkpoint_every", run->state_checkpoint_every}};
  }
  if (montecarlo) {
    doc["montecarlo"] = {
        {"n_samples", montecarlo->n_samples},
        {"seed", montecarlo->seed},
        {"eps", montecarlo->eps},
        {"t_max", montecarlo->t_max},
        {"state_kind", montecarlo->state_kind == StateKind::kFullSystem
                           ? "full-system"
                           : "queue-basis-product"},
        {"n_threads", montecarlo->n_threads}};
  }
  return doc;
}

DensityMatrix resolve_initial_state(const ExperimentConfig& cfg) {
  const QueueDims& dims = cfg.dims;
  switch (cfg.initial_state.kind) {
    case InitialStateKind::kExplicit:
      return DensityMatrix(cfg.initial_state.matrix);
    case InitialStateKind::kMaximallyMixed:
      return DensityMatrix::maximally_mixed(dims.total_dim());
    case InitialStateKind::kHsRandom: {
      GaussianRng rng(cfg.seed);
      return hs_random_state(dims.total_dim(), rng);
    }
    case InitialStateKind::kHalfFilledBasis:
      return DensityMatrix::basis_state(dims.total_dim(),
                                        dims.basis_index(0, 0, dims.d_q / 2));
    case InitialStateKind::kPaperInitial: {
      ComplexVector coin(2);
      coin << Complex(1.0, 0.0) / std::sqrt(2.0), Complex(0.0, -1.0) / std::sqrt(2.0);
      const ComplexMatrix c = coin * coin.adjoint();
      ComplexMatrix q = ComplexMatrix::Zero(dims.d_q, dims.d_q);
      q(dims.d_q / 2, dims.d_q / 2) = 1.0;
      return DensityMatrix(kron(kron(c, c), q));
    }
  }
  throw ConfigError("config: unknown initial state kind");
}

SimulateResult run_simulate(const ExperimentConfig& cfg) {
  if (!cfg.run) throw ConfigError("simulate requires a 'run' section");
  const KrausChannel step = build_step_channel(cfg.dims, cfg.coin, cfg.classical);
  const DensityMatrix rho0 = resolve_initial_state(cfg);

  SimulateResult result;
  TrajectoryOptions opts;
  opts.state_checkpoint_every = cfg.run->state_checkpoint_every;
  result.trajectory = run_trajectory(step, rho0, cfg.dims, cfg.run->t_max, opts);
  result.per_state = check_semistability_per_state(step, rho0, cfg.dims,
                                                   cfg.run->eps, cfg.run->t_max);
  if (cfg.dims.total_dim() <= kMaxSuperoperatorStateDim) {
    result.operator_level = check_semistability_operator(step, cfg.dims,
                                                         cfg.run->eps, cfg.run->t_max);
  }
  return result;
}

SpectrumResult run_spectrum(const ExperimentConfig& cfg, bool leading_only) {
  const KrausChannel step = build_step_channel(cfg.dims, cfg.coin, cfg.classical);
  SpectrumResult result;
  if (leading_only) {
    result.leading = leading_eigenvalue_estimate(step);
    return result;
  }
  result.full = classify_spectrum(step);  // CapabilityError past the gate
  return result;
}

MonteCarloSummary run_montecarlo(const ExperimentConfig& cfg) {
  if (!cfg.montecarlo) throw ConfigError("montecarlo requires a 'montecarlo' section");
  const KrausChannel step = build_step_channel(cfg.dims, cfg.coin, cfg.classical);
  return monte_carlo_mean(step, cfg.dims, *cfg.montecarlo);
}

StochasticMatrix run_classical_matrix(const ExperimentConfig& cfg) {
  return extract_stochastic_matrix(cfg.coin, cfg.dims);
}

}  // namespace dtqmc
