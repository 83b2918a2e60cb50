#include <doctest.h>

#include "dtqmc/config.hpp"
#include "helpers.hpp"

using namespace dtqmc;

namespace {

// rho -> tr(rho) 1/N on the full system, as Kraus set {|i><j|/sqrt(N)}.
KrausChannel full_depolarizing(Index n) {
  std::vector<ComplexMatrix> ops;
  const double s = 1.0 / std::sqrt(double(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = s;
      ops.push_back(std::move(e));
    }
  }
  return KrausChannel::from_dense(ops);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("identity channel converges immediately per state") {
  const QueueDims dims(2, 2, 3);
  const SemistabilityReport rep = check_semistability_per_state(
      KrausChannel::identity(dims.total_dim()),
      DensityMatrix::maximally_mixed(dims.total_dim()), dims, 1e-9, 100);
  CHECK(rep.converged);
  CHECK(rep.t_stop == 0);
  CHECK(rep.final_norm == 0.0);
  CHECK(rep.norm_history.size() == kConfirmationWindow);
}

TEST_CASE("Hadamard example does not settle quickly") {
  const QueueDims dims(2, 2, 10);
  ExperimentConfig cfg;
  cfg.dims = dims;
  cfg.initial_state.kind = InitialStateKind::kPaperInitial;
  const SemistabilityReport rep = check_semistability_per_state(
      build_step_channel(dims, CoinSpec::hadamard(), false),
      resolve_initial_state(cfg), dims, 1e-6, 60);
  CHECK_FALSE(rep.converged);
  CHECK(rep.t_stop == -1);
  CHECK(rep.final_norm > 1e-4);
}

TEST_CASE("classical fair-coin walk flattens towards uniform by step 49") {
  const QueueDims dims(2, 2, 10);
  const KrausChannel step = build_step_channel(dims, CoinSpec::hadamard(), true);
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(dims.total_dim(), dims.basis_index(0, 0, 5));
  const Trajectory traj = run_trajectory(step, rho0, dims, 49, TrajectoryOptions{0});
  const double tv = tv_distance(traj.distributions[49], uniform_distribution(10));
  CHECK(tv <= 0.05);
  CHECK(tv == doctest::Approx(0.0297009795554).epsilon(1e-4));
}

TEST_CASE("operator-level check: identity settles at zero") {
  const QueueDims dims(2, 2, 3);
  const SemistabilityReport rep = check_semistability_operator(
      KrausChannel::identity(dims.total_dim()), dims, 1e-9, 50);
  CHECK(rep.converged);
  CHECK(rep.t_stop == 0);
  CHECK(rep.final_norm == 0.0);
  CHECK(rep.method == SemistabilityMethod::kOperatorLevel);
}

TEST_CASE("operator-level check: depolarizing projects after one step") {
  const QueueDims dims(2, 2, 3);
  const SemistabilityReport rep = check_semistability_operator(
      full_depolarizing(dims.total_dim()), dims, 1e-12, 50);
  CHECK(rep.converged);
  CHECK(rep.t_stop == 1);
  REQUIRE(rep.norm_history.size() >= 2);
  CHECK(rep.norm_history[0].second > 0.1);      // t=1: C Phi != C
  CHECK(rep.norm_history[1].second <= 1e-12);   // t=2 onward: Phi^2 = Phi
}

TEST_CASE("operator-level check refuses past the dense gate") {
  const QueueDims dims(4, 4, 10);  // state dim 160 > 64
  const KrausChannel step = build_step_channel(dims, CoinSpec::walsh_hadamard(2), false);
  CHECK_THROWS_AS(check_semistability_operator(step, dims, 1e-6, 10), CapabilityError);
}

TEST_CASE("operator norm dominates the per-state norm") {
  const QueueDims dims(2, 2, 4);
  const KrausChannel step = build_step_channel(dims, CoinSpec::hadamard(), false);
  const SemistabilityReport op_rep =
      check_semistability_operator(step, dims, 1e-15, 15);
  GaussianRng rng(71);
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix rho0 = hs_random_state(dims.total_dim(), rng);
    const SemistabilityReport st_rep =
        check_semistability_per_state(step, rho0, dims, 1e-15, 15);
    for (std::size_t t = 0; t < st_rep.norm_history.size(); ++t) {
      CHECK(st_rep.norm_history[t].second <=
            op_rep.norm_history[t].second + 1e-12);
    }
  }
}

TEST_CASE("spectrum classification of canonical channels") {
  CHECK(classify_spectrum(full_depolarizing(4)).classification ==
        SpectrumReport::Case::kUniqueUnit);

  const KrausChannel hch = KrausChannel::from_dense({hadamard_matrix()});
  const SpectrumReport hrep = classify_spectrum(hch);
  CHECK(hrep.classification == SpectrumReport::Case::kDegenerate);
  REQUIRE(hrep.eigenvalues.size() == 4);
  // H (x) H with H eigenvalues +-1: superoperator spectrum {1, 1, -1, -1}.
  CHECK(std::abs(hrep.eigenvalues[0] - Complex(1, 0)) < 1e-10);
  CHECK(std::abs(hrep.eigenvalues[1] - Complex(1, 0)) < 1e-10);
  CHECK(std::abs(hrep.eigenvalues[2] - Complex(-1, 0)) < 1e-10);
  CHECK(std::abs(hrep.eigenvalues[3] - Complex(-1, 0)) < 1e-10);

  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const SpectrumReport drep = classify_spectrum(KrausChannel::from_dense({p0, p1}));
  CHECK(drep.classification == SpectrumReport::Case::kDegenerate);
  CHECK(drep.n_unit_modulus == 2);
}

TEST_CASE("case1 forces operator-level convergence") {
  const QueueDims dims(2, 2, 3);
  const KrausChannel dep = full_depolarizing(dims.total_dim());
  REQUIRE(classify_spectrum(dep).classification == SpectrumReport::Case::kUniqueUnit);
  for (double eps : {1e-3, 1e-9, 1e-13}) {
    CHECK(check_semistability_operator(dep, dims, eps, 100).converged);
  }
}

TEST_CASE("stochastic matrix of the identity coin") {
  const StochasticMatrix m =
      extract_stochastic_matrix(CoinSpec::identity(), QueueDims(2, 2, 10));
  CHECK((m.entries - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stochastic matrix of the Hadamard coin is fair") {
  const StochasticMatrix m =
      extract_stochastic_matrix(CoinSpec::hadamard(), QueueDims(2, 2, 10));
  REQUIRE(m.entries.rows() == 2);
  for (Index x = 0; x < 2; ++x) {
    for (Index i = 0; i < 2; ++i) {
      CHECK(m.entries(x, i) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  CHECK(m.tp_error <= 1e-10);
}

TEST_CASE("grover(4) and dft(4) coins give doubly uniform matrices") {
  for (const CoinSpec& coin : {CoinSpec::grover(4), CoinSpec::dft(4)}) {
    const StochasticMatrix m = extract_stochastic_matrix(coin, QueueDims(4, 4, 10));
    REQUIRE(m.entries.rows() == 4);
    for (Index x = 0; x < 4; ++x) {
      for (Index i = 0; i < 4; ++i) {
        CHECK(m.entries(x, i) == doctest::Approx(0.25).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("grover(2) reduces to the deterministic swap") {
  const StochasticMatrix m =
      extract_stochastic_matrix(CoinSpec::grover(2), QueueDims(2, 2, 10));
  CHECK(m.entries(0, 0) == doctest::Approx(0.0));
  CHECK(m.entries(1, 0) == doctest::Approx(1.0));
  CHECK(m.entries(0, 1) == doctest::Approx(1.0));
  CHECK(m.entries(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("unitary coins reduce to entrywise squared moduli") {
  GaussianRng rng(72);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix u = testing::random_unitary(4, rng);
    const StochasticMatrix m = extract_stochastic_matrix(
        CoinSpec::custom_unitary(u, CoinApplication::kJoint), QueueDims(2, 2, 10));
    for (Index x = 0; x < 4; ++x) {
      for (Index i = 0; i < 4; ++i) {
        CHECK(std::abs(m.entries(x, i) - std::norm(u(x, i))) < 1e-12);
      }
    }
    CHECK(m.column_sum_error <= 1e-10);
  }
}

TEST_CASE("kraus coins stay column-stochastic") {
  GaussianRng rng(73);
  const QueueDims dims(2, 2, 10);
  // Random CPTP coin on the joint space.
  const KrausChannel raw = testing::random_channel(4, 3, rng);
  const StochasticMatrix m =
      extract_stochastic_matrix(CoinSpec::custom_kraus(raw.dense_ops()), dims);
  CHECK(m.column_sum_error <= 1e-10);
  CHECK(m.entries.minCoeff() >= -1e-12);
}

TEST_CASE("tail average guard accepts decay and rejects growth") {
  std::vector<std::pair<long, double>> decaying, growing;
  for (long t = 1; t <= 60; ++t) {
    decaying.emplace_back(t, 1.0 / double(t));
    growing.emplace_back(t, double(t));
  }
  CHECK(tail_averages_nonincreasing(decaying, 1e-12));
  CHECK_FALSE(tail_averages_nonincreasing(growing, 1e-12));
  // Short histories pass vacuously.
  CHECK(tail_averages_nonincreasing({{1, 0.5}}, 1e-12));
}

TEST_CASE("norm histories from the classical walk decay on average") {
  const QueueDims dims(2, 2, 10);
  const KrausChannel step = build_step_channel(dims, CoinSpec::hadamard(), true);
  const SemistabilityReport rep = check_semistability_per_state(
      step, DensityMatrix::basis_state(dims.total_dim(), dims.basis_index(0, 0, 5)),
      dims, 1e-9, 80);
  CHECK(tail_averages_nonincreasing(rep.norm_history, 1e-9));
}

}  // TEST_SUITE
