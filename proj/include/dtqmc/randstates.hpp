#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dtqmc/analysis.hpp"

namespace dtqmc {

// splitmix64 finalizer; the documented sub-seed derivation is
//   subseed(master, k) = splitmix64(master + (k+1) * 0x9E3779B97F4A7C15),
// so sample k's stream is fixed by (master, k) alone and results do not
// depend on how samples are distributed over workers.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index);

// Standard-normal generator: mt19937_64 driven Box-Muller transform.
// Both pieces are fully specified, so a seed reproduces the same stream
// on any platform.
class GaussianRng {
 public:
  static constexpr const char* kName = "mt19937_64/box-muller";

  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  // U(0,1) from the top 53 bits.
  double uniform();

  // N(0,1).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// n x n matrix with i.i.d. standard complex Gaussian entries (real and
// imaginary parts each N(0,1)), filled row-major, real part first.
ComplexMatrix ginibre(Index n, GaussianRng& rng);

// Hilbert-Schmidt random density matrix: A A^dagger / tr(A A^dagger)
// for Ginibre A. Full rank with probability one.
DensityMatrix hs_random_state(Index n, GaussianRng& rng);

enum class StateKind { kFullSystem, kQueueBasisProduct };

struct SampleConfig {
  long n_samples = 1000;
  std::uint64_t seed = 0;
  double eps = 1e-6;       // per-sample semistability threshold
  long t_max = 10000;      // per-sample step budget
  StateKind state_kind = StateKind::kFullSystem;
  int queue_basis_index = -1;  // kQueueBasisProduct; -1 means d_q/2
  int n_threads = 0;           // 0 = hardware concurrency

  void validate() const;
};

struct MonteCarloSummary {
  QueueLengthDistribution mean;
  RealVector stddev;  // per-bin sample standard deviation (n-1 denominator)
  long n_samples = 0;
  long n_converged = 0;
  std::uint64_t seed = 0;
  std::string generator;
  double eps = 0.0;
  long t_max = 0;
  long max_t_stop = 0;  // largest confirmed stopping step over samples
};

// Mean queue-length distribution over HS-random initial states: each
// sample draws rho_0, evolves until the per-state semistability
// criterion (or t_max), and contributes its final distribution.
// Samples run in parallel; sub-seeds are derived per sample index and
// the reduction uses pairwise summation in index order, so the output
// is bit-identical for any worker count.
MonteCarloSummary monte_carlo_mean(const KrausChannel& step, const QueueDims& dims,
                                   const SampleConfig& cfg);

// Pairwise (cascade) summation; deterministic for a fixed index order.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace dtqmc
