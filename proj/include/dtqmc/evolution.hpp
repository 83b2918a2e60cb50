#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dtqmc/queue_model.hpp"

namespace dtqmc {

// Probability vector over queue lengths 0..d_q-1. Entries are clamped
// at zero on extraction; `renormalized` is set when the raw sum drifted
// from 1 by more than 1e-10 and a renormalization was forced.
struct QueueLengthDistribution {
  RealVector probs;
  bool renormalized = false;
};

double l1_distance(const QueueLengthDistribution& a, const QueueLengthDistribution& b);
double l1_distance(const RealVector& a, const RealVector& b);

// Half the L1 distance.
double tv_distance(const QueueLengthDistribution& a, const QueueLengthDistribution& b);

QueueLengthDistribution uniform_distribution(int d_q);

// p(i) = <i| tr_IO(rho) |i>.
QueueLengthDistribution queue_distribution(const ComplexMatrix& rho,
                                           const QueueDims& dims);
QueueLengthDistribution queue_distribution(const DensityMatrix& rho,
                                           const QueueDims& dims);

// t-fold application of the step channel. States are re-Hermitized
// every `rehermitize_every` steps to scrub accumulated roundoff.
DensityMatrix evolve(const KrausChannel& step, const DensityMatrix& rho0, long t);

// The measurement map C as an explicit d_q x N^2 matrix on row-stacked
// vectorized states: row i sums the diagonal entries <n,m,i|rho|n,m,i>
// over all coin indices, so C * vec(rho) = queue_distribution(rho).
// Entries are real; the complex type keeps it composable with
// superoperator algebra.
ComplexMatrix measurement_map(const QueueDims& dims);

struct TrajectoryOptions {
  int state_checkpoint_every = 50;  // 0 disables state checkpoints
  int rehermitize_every = 100;
  double drift_warning = 1e-8;
};

// Distribution at every step 0..t_max, full states at the checkpoint
// cadence. Index into `distributions` is the step number.
struct Trajectory {
  std::vector<QueueLengthDistribution> distributions;
  std::vector<std::pair<long, ComplexMatrix>> state_checkpoints;
  std::vector<std::string> warnings;
};

Trajectory run_trajectory(const KrausChannel& step, const DensityMatrix& rho0,
                          const QueueDims& dims, long t_max,
                          const TrajectoryOptions& opts = {});

}  // namespace dtqmc
