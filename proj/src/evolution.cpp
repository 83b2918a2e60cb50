#include "dtqmc/evolution.hpp"

#include <cmath>

namespace dtqmc {

double l1_distance(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) {
    throw InvalidDimsError("l1_distance: length mismatch");
  }
  return (a - b).cwiseAbs().sum();
}

double l1_distance(const QueueLengthDistribution& a, const QueueLengthDistribution& b) {
  return l1_distance(a.probs, b.probs);
}

double tv_distance(const QueueLengthDistribution& a, const QueueLengthDistribution& b) {
  return 0.5 * l1_distance(a, b);
}

QueueLengthDistribution uniform_distribution(int d_q) {
  return {RealVector::Constant(d_q, 1.0 / d_q), false};
}

QueueLengthDistribution queue_distribution(const ComplexMatrix& rho,
                                           const QueueDims& dims) {
  if (rho.rows() != dims.total_dim() || rho.cols() != dims.total_dim()) {
    throw InvalidDimsError("queue_distribution: state dimension mismatch");
  }
  QueueLengthDistribution out;
  out.probs.resize(dims.d_q);
  for (int i = 0; i < dims.d_q; ++i) {
    double p = 0.0;
    for (int n = 0; n < dims.d_i; ++n) {
      for (int m = 0; m < dims.d_o; ++m) {
        const Index r = dims.basis_index(n, m, i);
        p += rho(r, r).real();
      }
    }
    if (p < -1e-12) {
      throw InvalidValueError("queue_distribution: probability " +
                              std::to_string(p) + " below clamp tolerance");
    }
    out.probs(i) = std::max(p, 0.0);
  }
  const double sum = out.probs.sum();
  if (std::abs(sum - 1.0) > 1e-10) {
    if (sum <= 0.0) {
      throw InvalidValueError("queue_distribution: vanishing total probability");
    }
    out.probs /= sum;
    out.renormalized = true;
  }
  return out;
}

QueueLengthDistribution queue_distribution(const DensityMatrix& rho,
                                           const QueueDims& dims) {
  return queue_distribution(rho.mat(), dims);
}

namespace {

constexpr int kRehermitizeEvery = 100;

void rehermitize(ComplexMatrix& x) { x = 0.5 * (x + x.adjoint().eval()); }

}  // namespace

DensityMatrix evolve(const KrausChannel& step, const DensityMatrix& rho0, long t) {
  if (step.dim() != rho0.dim()) {
    throw InvalidDimsError("evolve: channel and state dimensions differ");
  }
  if (t < 0) throw InvalidValueError("evolve: negative step count");
  if (t == 0) return rho0;
  ComplexMatrix cur = rho0.mat();
  ComplexMatrix next, scratch(step.dim(), step.dim());
  for (long s = 1; s <= t; ++s) {
    step.apply_into(cur, next, scratch);
    cur.swap(next);
    if (s % kRehermitizeEvery == 0) rehermitize(cur);
  }
  rehermitize(cur);
  return DensityMatrix(std::move(cur));
}

ComplexMatrix measurement_map(const QueueDims& dims) {
  const Index n_tot = dims.total_dim();
  ComplexMatrix c = ComplexMatrix::Zero(dims.d_q, n_tot * n_tot);
  for (int i = 0; i < dims.d_q; ++i) {
    for (int n = 0; n < dims.d_i; ++n) {
      for (int m = 0; m < dims.d_o; ++m) {
        const Index r = dims.basis_index(n, m, i);
        c(i, r * n_tot + r) = Complex(1.0, 0.0);
      }
    }
  }
  return c;
}

Trajectory run_trajectory(const KrausChannel& step, const DensityMatrix& rho0,
                          const QueueDims& dims, long t_max,
                          const TrajectoryOptions& opts) {
  if (step.dim() != dims.total_dim() || rho0.dim() != dims.total_dim()) {
    throw InvalidDimsError("run_trajectory: dimension mismatch");
  }
  if (t_max < 0) throw InvalidValueError("run_trajectory: negative t_max");

  Trajectory traj;
  traj.distributions.reserve(static_cast<std::size_t>(t_max) + 1);
  traj.distributions.push_back(queue_distribution(rho0, dims));

  ComplexMatrix cur = rho0.mat();
  ComplexMatrix next, scratch(step.dim(), step.dim());
  if (opts.state_checkpoint_every > 0) {
    traj.state_checkpoints.emplace_back(0, cur);
  }
  for (long t = 1; t <= t_max; ++t) {
    step.apply_into(cur, next, scratch);
    cur.swap(next);
    if (opts.rehermitize_every > 0 && t % opts.rehermitize_every == 0) {
      const double drift = hermiticity_error(cur);
      if (drift > opts.drift_warning) {
        traj.warnings.push_back("numerical degradation at step " +
                                std::to_string(t) + ": hermiticity drift " +
                                std::to_string(drift));
      }
      rehermitize(cur);
    }
    traj.distributions.push_back(queue_distribution(cur, dims));
    if (opts.state_checkpoint_every > 0 && t % opts.state_checkpoint_every == 0) {
      traj.state_checkpoints.emplace_back(t, cur);
    }
  }
  return traj;
}

}  // namespace dtqmc
