#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dtqmc/json_io.hpp"
#include "dtqmc/outputs.hpp"
#include "helpers.hpp"

using namespace dtqmc;
using nlohmann::json;

namespace {

json base_config() {
  return json{
      {"dims", {{"d_i", 2}, {"d_o", 2}, {"d_q", 10}}},
      {"coin", {{"kind", "hadamard"}}},
      {"mode", "quantum"},
      {"initial_state", {{"preset", "paper-initial"}}},
      {"run", {{"t_max", 20}, {"eps", 1e-6}}},
  };
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("dtqmc_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config parses with defaults") {
  const ExperimentConfig cfg = parse_experiment_config(base_config());
  CHECK(cfg.dims.d_q == 10);
  CHECK_FALSE(cfg.classical);
  CHECK(cfg.run.has_value());
  CHECK(cfg.run->t_max == 20);
  CHECK(cfg.run->state_checkpoint_every == 50);
  CHECK(cfg.output.formats == std::vector<std::string>{"csv", "json"});
  CHECK(cfg.resolved().contains("dims"));
}

TEST_CASE("run and montecarlo sections are mutually exclusive") {
  json both = base_config();
  both["montecarlo"] = {{"n_samples", 4}};
  CHECK_THROWS_AS(parse_experiment_config(both), ConfigError);

  json neither = base_config();
  neither.erase("run");
  CHECK_THROWS_AS(parse_experiment_config(neither), ConfigError);
}

TEST_CASE("malformed fields are rejected with diagnostics") {
  json bad_dims = base_config();
  bad_dims["dims"]["d_q"] = 2;  // violates d_q >= d_i + d_o - 1
  CHECK_THROWS_WITH_AS(parse_experiment_config(bad_dims),
                       doctest::Contains("dims"), ConfigError);

  json bad_kind = base_config();
  bad_kind["coin"]["kind"] = "bogus";
  CHECK_THROWS_WITH_AS(parse_experiment_config(bad_kind),
                       doctest::Contains("coin.kind"), ConfigError);

  json bad_coin_dim = base_config();
  bad_coin_dim["coin"] = {{"kind", "grover"}, {"d", 3}};
  CHECK_THROWS_AS(parse_experiment_config(bad_coin_dim), ConfigError);

  json bad_mode = base_config();
  bad_mode["mode"] = "both";
  CHECK_THROWS_AS(parse_experiment_config(bad_mode), ConfigError);

  json bad_preset = base_config();
  bad_preset["initial_state"] = {{"preset", "warm-start"}};
  CHECK_THROWS_AS(parse_experiment_config(bad_preset), ConfigError);

  json bad_paper_dims = base_config();
  bad_paper_dims["dims"] = {{"d_i", 4}, {"d_o", 4}, {"d_q", 10}};
  bad_paper_dims["coin"] = {{"kind", "walsh_hadamard"}, {"n", 2}};
  CHECK_THROWS_WITH_AS(parse_experiment_config(bad_paper_dims),
                       doctest::Contains("paper-initial"), ConfigError);

  json bad_format = base_config();
  bad_format["output"] = {{"formats", {"csv", "pdf"}}};
  CHECK_THROWS_AS(parse_experiment_config(bad_format), ConfigError);

  json bad_matrix = base_config();
  bad_matrix["initial_state"] = {{"matrix", matrix_to_json(ComplexMatrix::Identity(40, 40))}};
  CHECK_THROWS_AS(parse_experiment_config(bad_matrix), ConfigError);  // trace 40

  json wrong_dim_matrix = base_config();
  wrong_dim_matrix["initial_state"] =
      {{"matrix", matrix_to_json(ComplexMatrix::Identity(4, 4) * 0.25)}};
  CHECK_THROWS_AS(parse_experiment_config(wrong_dim_matrix), ConfigError);
}

TEST_CASE("initial-state presets resolve") {
  ExperimentConfig cfg = parse_experiment_config(base_config());

  const DensityMatrix paper = resolve_initial_state(cfg);
  CHECK(queue_distribution(paper, cfg.dims).probs(5) == doctest::Approx(1.0));
  // Coin register: (|0> - i|1>)/sqrt(2) per register.
  const ComplexMatrix reg = partial_trace(paper.mat(), SubsystemDims{2, 2, 10}, {1, 2});
  CHECK(reg(0, 0).real() == doctest::Approx(0.5));
  CHECK(reg(0, 1).imag() == doctest::Approx(0.5));

  cfg.initial_state.kind = InitialStateKind::kHalfFilledBasis;
  const DensityMatrix half = resolve_initial_state(cfg);
  CHECK(half.mat()(cfg.dims.basis_index(0, 0, 5), cfg.dims.basis_index(0, 0, 5)) ==
        Complex(1.0, 0.0));

  cfg.initial_state.kind = InitialStateKind::kMaximallyMixed;
  CHECK(resolve_initial_state(cfg).mat()(0, 0).real() == doctest::Approx(1.0 / 40));

  cfg.initial_state.kind = InitialStateKind::kHsRandom;
  cfg.seed = 31337;
  const DensityMatrix r1 = resolve_initial_state(cfg);
  const DensityMatrix r2 = resolve_initial_state(cfg);
  CHECK((r1.mat() - r2.mat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate command produces trajectory, reports and files") {
  json doc = base_config();
  doc["dims"]["d_q"] = 5;
  doc["initial_state"] = {{"preset", "half-filled-basis"}};
  const ExperimentConfig cfg = parse_experiment_config(doc);
  const SimulateResult result = run_simulate(cfg);
  CHECK(result.trajectory.distributions.size() == 21);
  CHECK(result.per_state.norm_history.size() >= 1);
  REQUIRE(result.operator_level.has_value());  // dim 20 <= 64

  const auto dir = fresh_dir("simulate");
  const auto files = write_simulate_outputs(result, cfg, dir.string());
  CHECK(files.size() == 5);  // trajectory, heatmap, 2 norm histories, report
  for (const auto& f : files) CHECK(std::filesystem::exists(f));

  // CSV round trip at full precision.
  const auto rows = parse_numeric_csv(slurp(dir / "trajectory.csv"));
  REQUIRE(rows.size() == 21);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    REQUIRE(rows[t].size() == 6);  // t + 5 bins
    CHECK(rows[t][0] == double(t));
    for (int b = 0; b < 5; ++b) {
      CHECK(rows[t][b + 1] == result.trajectory.distributions[t].probs(b));
    }
  }
}

TEST_CASE("svg emitters produce drawable documents") {
  json doc = base_config();
  doc["dims"]["d_q"] = 5;
  doc["initial_state"] = {{"preset", "half-filled-basis"}};
  doc["output"] = {{"formats", {"svg"}}};
  const ExperimentConfig cfg = parse_experiment_config(doc);
  const SimulateResult result = run_simulate(cfg);
  const auto dir = fresh_dir("svg");
  const auto files = write_simulate_outputs(result, cfg, dir.string());
  REQUIRE(files.size() == 1);
  const std::string svg = slurp(files[0]);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<rect") != std::string::npos);
}

TEST_CASE("spectrum command on a gated and an ungated system") {
  json doc = base_config();
  doc["dims"]["d_q"] = 3;
  doc.erase("run");
  doc["run"] = {{"t_max", 1}};
  const ExperimentConfig cfg = parse_experiment_config(doc);
  const SpectrumResult result = run_spectrum(cfg, false);
  REQUIRE(result.full.has_value());
  CHECK(std::abs(result.full->eigenvalues.front()) <= 1.0 + 1e-9);
  CHECK(result.full->n_unit_modulus >= 1);

  const auto dir = fresh_dir("spectrum");
  const auto files = write_spectrum_outputs(result, cfg, dir.string());
  CHECK(std::filesystem::exists(dir / "spectrum.csv"));
  const auto rows = parse_numeric_csv(slurp(dir / "spectrum.csv"));
  REQUIRE(rows.size() == result.full->eigenvalues.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i][0] == result.full->eigenvalues[i].real());
    CHECK(rows[i][1] == result.full->eigenvalues[i].imag());
    CHECK(rows[i][2] == std::abs(result.full->eigenvalues[i]));
  }

  // Past the gate: leading-only fallback works, dense route refuses.
  json big = base_config();
  big["dims"] = {{"d_i", 4}, {"d_o", 4}, {"d_q", 10}};
  big["coin"] = {{"kind", "walsh_hadamard"}, {"n", 2}};
  big["initial_state"] = {{"preset", "half-filled-basis"}};
  const ExperimentConfig big_cfg = parse_experiment_config(big);
  CHECK_THROWS_AS(run_spectrum(big_cfg, false), CapabilityError);
  const SpectrumResult leading = run_spectrum(big_cfg, true);
  REQUIRE(leading.leading.has_value());
  CHECK(std::abs(*leading.leading) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("montecarlo command emits summary files and determinism holds") {
  json doc = base_config();
  doc["dims"]["d_q"] = 4;
  doc["mode"] = "classical";
  doc["initial_state"] = {{"preset", "half-filled-basis"}};
  doc.erase("run");
  doc["montecarlo"] = {{"n_samples", 6}, {"seed", 99}, {"eps", 1e-7}, {"t_max", 3000}};
  const ExperimentConfig cfg = parse_experiment_config(doc);

  const MonteCarloSummary s1 = run_montecarlo(cfg);
  const MonteCarloSummary s2 = run_montecarlo(cfg);
  CHECK(summary_csv(s1) == summary_csv(s2));

  const auto dir = fresh_dir("mc");
  const auto files = write_montecarlo_outputs(s1, cfg, dir.string());
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));

  const auto meta = json::parse(slurp(dir / "summary.json"));
  CHECK(meta["generator"] == GaussianRng::kName);
  CHECK(meta["seed"] == 99);
  CHECK(meta["n_samples"] == 6);
  CHECK(meta["config"]["dims"]["d_q"] == 4);

  const auto rows = parse_numeric_csv(slurp(dir / "summary.csv"));
  REQUIRE(rows.size() == 4);
  for (Index b = 0; b < 4; ++b) {
    CHECK(rows[b][1] == s1.mean.probs(b));
    CHECK(rows[b][2] == s1.stddev(b));
  }
}

TEST_CASE("classical-matrix command verifies stochasticity") {
  json doc = base_config();
  const ExperimentConfig cfg = parse_experiment_config(doc);
  const StochasticMatrix m = run_classical_matrix(cfg);
  const auto dir = fresh_dir("cm");
  write_classical_matrix_outputs(m, cfg, dir.string());
  const auto verification = json::parse(slurp(dir / "verification.json"));
  CHECK(verification["verified"] == true);
  const auto rows = parse_numeric_csv(slurp(dir / "stochastic_matrix.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == doctest::Approx(0.5));

  json dft_doc = base_config();
  dft_doc["dims"] = {{"d_i", 4}, {"d_o", 4}, {"d_q", 10}};
  dft_doc["coin"] = {{"kind", "dft"}, {"d", 4}};
  dft_doc["initial_state"] = {{"preset", "half-filled-basis"}};
  const StochasticMatrix dft_m =
      run_classical_matrix(parse_experiment_config(dft_doc));
  CHECK(dft_m.entries.maxCoeff() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dft_m.entries.minCoeff() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("identity coin with a basis-state start is stationary from t=0") {
  json doc = base_config();
  doc["coin"] = {{"kind", "identity"}};
  doc["initial_state"] = {{"preset", "half-filled-basis"}};
  doc["run"] = {{"t_max", 30}, {"eps", 1e-9}};
  const SimulateResult result = run_simulate(parse_experiment_config(doc));
  CHECK(result.per_state.converged);
  CHECK(result.per_state.t_stop == 0);
  CHECK(result.trajectory.distributions.back().probs(5) == doctest::Approx(1.0));
}

TEST_CASE("format_double round-trips doubles exactly") {
  for (double x : {0.1 + 0.2, 1.0 / 3.0, 3.3632255914209873e-3, 1e-300}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("config file loading surfaces parse failures as config errors") {
  const auto dir = fresh_dir("cfgfile");
  const auto good = dir / "good.json";
  write_text_file(good.string(), base_config().dump());
  CHECK_NOTHROW(load_experiment_config(good.string()));

  const auto bad = dir / "bad.json";
  write_text_file(bad.string(), "{not json");
  CHECK_THROWS_AS(load_experiment_config(bad.string()), ConfigError);
  CHECK_THROWS_AS(load_experiment_config((dir / "missing.json").string()), ConfigError);
}

}  // TEST_SUITE
