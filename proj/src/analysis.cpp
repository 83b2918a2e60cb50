#include "dtqmc/analysis.hpp"

#include <cmath>
#include <numeric>

namespace dtqmc {

bool ConvergenceDetector::push(long t, double norm) {
  if (converged_) return true;
  if (norm <= eps_) {
    if (run_length_ == 0) t_stop_ = t;
    ++run_length_;
    if (run_length_ >= kConfirmationWindow) converged_ = true;
  } else {
    run_length_ = 0;
    t_stop_ = -1;
  }
  return converged_;
}

SemistabilityReport check_semistability_per_state(const KrausChannel& step,
                                                  const DensityMatrix& rho0,
                                                  const QueueDims& dims, double eps,
                                                  long t_max) {
  if (eps <= 0.0) throw InvalidValueError("check_semistability: eps must be > 0");
  if (step.dim() != dims.total_dim() || rho0.dim() != dims.total_dim()) {
    throw InvalidDimsError("check_semistability: dimension mismatch");
  }
  SemistabilityReport rep;
  rep.method = SemistabilityMethod::kPerState;
  rep.eps = eps;
  rep.t_max = t_max;

  ConvergenceDetector detector(eps);
  ComplexMatrix cur = rho0.mat();
  ComplexMatrix next, scratch(step.dim(), step.dim());
  RealVector prev = queue_distribution(cur, dims).probs;
  for (long t = 1; t <= t_max; ++t) {
    step.apply_into(cur, next, scratch);
    cur.swap(next);
    if (t % 100 == 0) cur = 0.5 * (cur + cur.adjoint().eval());
    RealVector p = queue_distribution(cur, dims).probs;
    const double norm = l1_distance(p, prev);
    prev.swap(p);
    rep.norm_history.emplace_back(t, norm);
    rep.final_norm = norm;
    if (detector.push(t, norm)) break;
  }
  rep.converged = detector.converged();
  rep.t_stop = detector.converged() ? detector.t_stop() - 1 : -1;
  return rep;
}

namespace {

double induced_one_norm(const ComplexMatrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

SemistabilityReport check_semistability_operator(const KrausChannel& step,
                                                 const QueueDims& dims, double eps,
                                                 long t_max) {
  if (eps <= 0.0) throw InvalidValueError("check_semistability: eps must be > 0");
  if (step.dim() != dims.total_dim()) {
    throw InvalidDimsError("check_semistability: dimension mismatch");
  }
  if (step.dim() > kMaxSuperoperatorStateDim) {
    throw CapabilityError(
        "check_semistability_operator: state dimension " +
        std::to_string(step.dim()) + " exceeds the superoperator gate (" +
        std::to_string(kMaxSuperoperatorStateDim) +
        "); use check_semistability_per_state");
  }
  SemistabilityReport rep;
  rep.method = SemistabilityMethod::kOperatorLevel;
  rep.eps = eps;
  rep.t_max = t_max;

  const SparseCMatrix phi = superoperator_sparse(step);
  ConvergenceDetector detector(eps);
  ComplexMatrix m = measurement_map(dims);
  ComplexMatrix m_next;
  for (long t = 1; t <= t_max; ++t) {
    m_next.noalias() = m * phi;
    const double norm = induced_one_norm(m_next - m);
    m.swap(m_next);
    rep.norm_history.emplace_back(t, norm);
    rep.final_norm = norm;
    if (detector.push(t, norm)) break;
  }
  rep.converged = detector.converged();
  rep.t_stop = detector.converged() ? detector.t_stop() - 1 : -1;
  return rep;
}

SpectrumReport classify_spectrum(const KrausChannel& step) {
  return spectrum(superoperator(step));
}

StochasticMatrix extract_stochastic_matrix(const CoinSpec& coin,
                                           const QueueDims& dims) {
  const Index d = coin.reduction_dim(dims);
  const KrausChannel coin_ch = KrausChannel::from_dense(coin.reduction_kraus(dims));

  std::vector<ComplexMatrix> deph;
  deph.reserve(static_cast<std::size_t>(d));
  for (Index x = 0; x < d; ++x) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    p(x, x) = 1.0;
    deph.push_back(std::move(p));
  }
  const KrausChannel reduced = compose(KrausChannel::from_dense(deph), coin_ch);
  const Superoperator s = superoperator(reduced);

  StochasticMatrix out;
  out.entries.resize(d, d);
  for (Index x = 0; x < d; ++x) {
    for (Index i = 0; i < d; ++i) {
      out.entries(x, i) = s.mat(x * d + x, i * d + i).real();
    }
  }
  out.tp_error = tp_check_error(jamiolkowski(s));

  out.column_sum_error = 0.0;
  for (Index i = 0; i < d; ++i) {
    out.column_sum_error =
        std::max(out.column_sum_error, std::abs(out.entries.col(i).sum() - 1.0));
  }
  if (out.column_sum_error > 1e-8 || out.tp_error > 1e-8) {
    throw Error("extract_stochastic_matrix: stochasticity violated (column sum "
                "error " + std::to_string(out.column_sum_error) + ", TP error " +
                std::to_string(out.tp_error) + "); indexing fault");
  }
  return out;
}

bool tail_averages_nonincreasing(const std::vector<std::pair<long, double>>& history,
                                 double eps, int window) {
  if (static_cast<int>(history.size()) < 2 * window) return true;
  const std::size_t n = history.size();
  double tail = 0.0, before = 0.0;
  for (int k = 0; k < window; ++k) {
    tail += history[n - 1 - k].second;
    before += history[n - 1 - window - k].second;
  }
  return tail / window <= before / window + eps;
}

}  // namespace dtqmc
