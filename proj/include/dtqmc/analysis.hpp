#pragma once

#include <utility>
#include <vector>

#include "dtqmc/evolution.hpp"

namespace dtqmc {

// Steps the difference norm must stay below eps before convergence is
// declared; guards against period-2 oscillations from peripheral
// eigenvalues at -1.
inline constexpr int kConfirmationWindow = 10;

enum class SemistabilityMethod { kPerState, kOperatorLevel };

// Result of a semistability check. norm_history holds (t, norm) where
// norm at step t is ||p_t - p_{t-1}||_1 (per-state) or the induced
// 1-norm of C Phi^t - C Phi^{t-1} (operator level), t >= 1. t_stop is
// the first step from which the norm stayed <= eps for the whole
// confirmation window.
struct SemistabilityReport {
  bool converged = false;
  long t_stop = -1;
  double final_norm = 0.0;
  std::vector<std::pair<long, double>> norm_history;
  SemistabilityMethod method = SemistabilityMethod::kPerState;
  double eps = 0.0;
  long t_max = 0;
};

// Tracks the trailing confirmation window over a stream of difference
// norms; shared by the semistability checks and the Monte Carlo
// stopping rule.
class ConvergenceDetector {
 public:
  explicit ConvergenceDetector(double eps) : eps_(eps) {}

  // Feed the norm for step t (t = 1, 2, ...). Returns true once the
  // window is complete.
  bool push(long t, double norm);

  bool converged() const { return converged_; }
  long t_stop() const { return t_stop_; }

 private:
  double eps_;
  int run_length_ = 0;
  bool converged_ = false;
  long t_stop_ = -1;
};

// Per-state criterion: evolve rho0 and report the first step from which
// consecutive queue-length distributions differ by at most eps in L1
// for kConfirmationWindow steps.
SemistabilityReport check_semistability_per_state(const KrausChannel& step,
                                                  const DensityMatrix& rho0,
                                                  const QueueDims& dims, double eps,
                                                  long t_max);

// Operator-level criterion: iterate M_t = C Phi^t (one multiply per
// step) and report the induced 1-norm of M_t - M_{t-1}, which bounds
// the per-state L1 criterion uniformly over initial states. Gated on
// superoperator materializability.
SemistabilityReport check_semistability_operator(const KrausChannel& step,
                                                 const QueueDims& dims, double eps,
                                                 long t_max);

// Full spectral classification of the step channel (dense gate applies).
SpectrumReport classify_spectrum(const KrausChannel& step);

// Column-stochastic matrix: entry (x, i) is the probability of the
// classical coin outcome x given classical input i, so each column sums
// to one.
struct StochasticMatrix {
  RealMatrix entries;
  double column_sum_error = 0.0;  // max deviation of a column sum from 1
  double tp_error = 0.0;          // Jamiolkowski trace test residual
};

// Classical reduction of the coin: the superoperator of
// Phi_D . Phi_C restricted to the coin registers, read out on the
// diagonal-to-diagonal block. For a unitary coin U this equals the
// entrywise squared moduli |U_xi|^2. Verified trace-preserving through
// the Jamiolkowski test; column sums off by more than 1e-8 indicate an
// internal indexing fault and throw.
StochasticMatrix extract_stochastic_matrix(const CoinSpec& coin,
                                           const QueueDims& dims);

// True when the tail of a norm history is non-increasing in the
// averaged sense: the mean over the last `window` entries exceeds the
// mean over the preceding `window` by no more than eps. Flags
// oscillatory non-convergence without asserting strict monotonicity.
bool tail_averages_nonincreasing(const std::vector<std::pair<long, double>>& history,
                                 double eps, int window = 20);

}  // namespace dtqmc
