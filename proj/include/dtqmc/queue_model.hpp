#pragma once

#include <string>
#include <vector>

#include "dtqmc/channel.hpp"

namespace dtqmc {

// Register dimensions of the queue system: input register I (jobs
// arriving per step), output register O (jobs serviced per step) and
// queue register Q (queue length 0 .. d_q-1). Basis ordering is
// I (x) O (x) Q with subsystem 0 the slowest-varying factor.
//
// d_q >= d_i + d_o - 1 keeps the three queue-update regimes disjoint and
// exhaustive: L = {0..d_o-2}, the shift range {d_o-1..d_q-d_i} and
// U = {d_q-d_i+1..d_q-1} partition the queue basis.
struct QueueDims {
  int d_i;
  int d_o;
  int d_q;

  QueueDims(int di, int do_, int dq);

  Index coin_dim() const { return Index(d_i) * d_o; }
  Index total_dim() const { return Index(d_i) * d_o * d_q; }
  Index basis_index(int n, int m, int j) const {
    return (Index(n) * d_o + m) * d_q + j;
  }
};

enum class CoinKind {
  kHadamard,
  kWalshHadamard,
  kGrover,
  kDft,
  kCustomUnitary,
  kCustomKraus,
};

// How a unitary coin addresses the job registers: one copy per register
// (U^I (x) U^O, the form used for the named coins) or a single operator
// on the joint I (x) O space.
enum class CoinApplication { kPerRegister, kJoint };

// coin_matrix: the named coin unitaries.
ComplexMatrix hadamard_matrix();
ComplexMatrix walsh_hadamard_matrix(int n);  // hadamard^(x)n, dim 2^n
ComplexMatrix grover_matrix(int d);          // 2/d - 1 diagonal, 2/d off-diagonal
ComplexMatrix dft_matrix(int d);             // (j,k) -> exp(2 pi i j k / d)/sqrt(d)

// The flow-of-jobs channel acting on I (x) O (identity on Q). Unitary
// kinds carry a single operator; custom_kraus takes an arbitrary CPTP
// set on the joint coin space.
class CoinSpec {
 public:
  static CoinSpec hadamard();
  static CoinSpec walsh_hadamard(int n);
  static CoinSpec grover(int d);
  static CoinSpec dft(int d);
  static CoinSpec identity(int d = 2);  // per-register identity
  static CoinSpec custom_unitary(ComplexMatrix u,
                                 CoinApplication app = CoinApplication::kPerRegister);
  static CoinSpec custom_kraus(std::vector<ComplexMatrix> ops);

  CoinKind kind() const { return kind_; }
  CoinApplication application() const { return application_; }
  bool is_unitary() const { return kind_ != CoinKind::kCustomKraus; }

  // The single-register matrix for per-register coins (or the joint
  // matrix for joint unitary coins).
  const ComplexMatrix& unitary() const;

  // Kraus operators on the joint coin space d_i*d_o, validated against
  // the given register dimensions.
  std::vector<ComplexMatrix> coin_space_kraus(const QueueDims& dims) const;

  // Dimension the stochastic-matrix reduction acts on: the register
  // dimension for per-register coins, d_i*d_o for joint ones.
  Index reduction_dim(const QueueDims& dims) const;

  // Kraus operators on the reduction space.
  std::vector<ComplexMatrix> reduction_kraus(const QueueDims& dims) const;

  std::string name() const;

 private:
  CoinSpec(CoinKind kind, CoinApplication app) : kind_(kind), application_(app) {}

  CoinKind kind_;
  CoinApplication application_;
  int param_ = 0;                        // n for walsh_hadamard, d for grover/dft
  ComplexMatrix unitary_;                // named and custom unitary kinds
  std::vector<ComplexMatrix> kraus_;     // custom_kraus
};

// Queue-update channel Phi_K: 1 + (d_o-1) + (d_i-1) Kraus operators.
// The shift operator moves |n,m,j> to |n,m,j+n-m> for j in the interior
// range; lower-barrier operators clamp j+n-m at 0 for each l in L and
// upper-barrier operators clamp at d_q-1 for each u in U. All operators
// are 0/1 partial isometries on disjoint column supports, so the
// completeness relation holds exactly.
KrausChannel build_queue_channel(const QueueDims& dims);

// Coin channel Phi_C: each coin-space Kraus operator tensored with the
// identity on Q.
KrausChannel build_coin_channel(const CoinSpec& coin, const QueueDims& dims);

// Coin-register dephasing Phi_D: projectors |x><x| (x) 1_Q for every
// joint coin basis state x. Kills all coin coherences, acts trivially
// on Q.
KrausChannel build_dephasing_channel(const QueueDims& dims);

// Coin reset: traces out I and O and re-prepares |0><0| (x) |0><0|.
// Kraus operators |00><nm| (x) 1_Q.
KrausChannel build_reset_channel(const QueueDims& dims);

// One full time step.
//   quantum  (classical=false): Phi_K . Phi_C
//   classical (classical=true): Phi_K . Phi_D . Phi_C . Phi_reset,
//     i.e. each step a fresh coin |00> is prepared, the coin acts, the
//     result is dephased to a classical distribution, and the queue
//     updates. Diagonal states stay diagonal under this step.
KrausChannel build_step_channel(const QueueDims& dims, const CoinSpec& coin,
                                bool classical);

}  // namespace dtqmc
