#include "dtqmc/channel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dtqmc {

KrausChannel::KrausChannel(Index dim, std::vector<SparseCMatrix> ops)
    : dim_(dim), ops_(std::move(ops)) {
  if (dim_ < 1) throw InvalidDimsError("KrausChannel: dim must be positive");
  if (ops_.empty()) throw InvalidValueError("KrausChannel: empty Kraus set");
  for (const auto& k : ops_) {
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw InvalidDimsError("KrausChannel: operator shape mismatch");
    }
  }
  adj_.reserve(ops_.size());
  for (const auto& k : ops_) {
    adj_.push_back(SparseCMatrix(k.adjoint()));
  }
  const double err = completeness_error();
  if (!(err <= kCompletenessTol)) {
    throw InvalidValueError("KrausChannel: completeness violation, |sum K^t K - 1| = " +
                            std::to_string(err));
  }
}

KrausChannel KrausChannel::from_dense(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) throw InvalidValueError("KrausChannel: empty Kraus set");
  for (const auto& k : ops) {
    if (!is_finite(k)) throw InvalidValueError("KrausChannel: non-finite entries");
  }
  std::vector<SparseCMatrix> sp;
  sp.reserve(ops.size());
  for (const auto& k : ops) sp.push_back(to_sparse(k));
  return KrausChannel(ops.front().rows(), std::move(sp));
}

KrausChannel KrausChannel::identity(Index dim) {
  return KrausChannel(dim, {sparse_identity(dim)});
}

std::vector<ComplexMatrix> KrausChannel::dense_ops() const {
  std::vector<ComplexMatrix> out;
  out.reserve(ops_.size());
  for (const auto& k : ops_) out.emplace_back(k);
  return out;
}

double KrausChannel::completeness_error() const {
  SparseCMatrix acc(dim_, dim_);
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    acc = acc + SparseCMatrix(adj_[k] * ops_[k]);
  }
  ComplexMatrix diff = ComplexMatrix(acc) - ComplexMatrix::Identity(dim_, dim_);
  return diff.norm();
}

void KrausChannel::apply_into(const ComplexMatrix& x, ComplexMatrix& out,
                              ComplexMatrix& scratch) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw InvalidDimsError("KrausChannel::apply: state dimension mismatch");
  }
  out.setZero(dim_, dim_);
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    scratch.noalias() = ops_[k] * x;
    out.noalias() += scratch * adj_[k];
  }
}

ComplexMatrix KrausChannel::apply_matrix(const ComplexMatrix& x) const {
  ComplexMatrix out, scratch(dim_, dim_);
  apply_into(x, out, scratch);
  return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  ComplexMatrix m = apply_matrix(rho.mat());
  m = 0.5 * (m + m.adjoint().eval());  // scrub roundoff asymmetry
  return DensityMatrix(std::move(m));
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.dim() != inner.dim()) {
    throw InvalidDimsError("compose: channel dimensions differ");
  }
  std::vector<SparseCMatrix> prods;
  prods.reserve(outer.size() * inner.size());
  for (std::size_t a = 0; a < outer.size(); ++a) {
    for (std::size_t b = 0; b < inner.size(); ++b) {
      prods.push_back(SparseCMatrix(outer.op(a) * inner.op(b)));
    }
  }
  return KrausChannel(outer.dim(), std::move(prods));
}

SparseCMatrix superoperator_sparse(const KrausChannel& ch) {
  const Index n2 = ch.dim() * ch.dim();
  SparseCMatrix acc(n2, n2);
  for (std::size_t k = 0; k < ch.size(); ++k) {
    SparseCMatrix conj_k = ch.op(k).conjugate();
    acc = acc + kron_sparse(ch.op(k), conj_k);
  }
  return acc;
}

Superoperator superoperator(const KrausChannel& ch) {
  if (ch.dim() > kMaxSuperoperatorStateDim) {
    throw CapabilityError(
        "superoperator: dense materialization refused for state dimension " +
        std::to_string(ch.dim()) + " (limit " +
        std::to_string(kMaxSuperoperatorStateDim) +
        "); use power iteration or per-state analysis");
  }
  return Superoperator{ch.dim(), ComplexMatrix(superoperator_sparse(ch))};
}

SpectrumReport spectrum(const Superoperator& s) {
  SpectrumReport rep;
  rep.eigenvalues = eigenvalues(s.mat);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const Complex& a, const Complex& b) {
              const double ma = std::abs(a), mb = std::abs(b);
              // Moduli equal to roundoff tie-break on (re, im) so
              // degenerate peripheral pairs order deterministically.
              if (std::abs(ma - mb) > 1e-12 * (1.0 + ma + mb)) return ma > mb;
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  for (const Complex& z : rep.eigenvalues) {
    if (std::abs(z) > 1.0 - 1e-9) ++rep.n_unit_modulus;
  }
  rep.classification = (rep.n_unit_modulus == 1)
                           ? SpectrumReport::Case::kUniqueUnit
                           : SpectrumReport::Case::kDegenerate;
  return rep;
}

namespace {

// Hermitize, fix the global phase so the trace is real positive, and
// normalize to trace one. Returns the matrix and its pre-normalization
// absolute trace (a quality measure for fixed-point candidates).
std::pair<ComplexMatrix, double> hermitized_candidate(const ComplexVector& v) {
  ComplexMatrix x = devectorize(v);
  const Complex tr = x.trace();
  if (std::abs(tr) > 0.0) {
    x *= std::conj(tr) / std::abs(tr);  // rotate phase: trace -> |tr|
  }
  ComplexMatrix h = 0.5 * (x + x.adjoint().eval());
  return {h, std::abs(h.trace())};
}

}  // namespace

InvariantStateResult invariant_state(const Superoperator& s) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(s.mat, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("invariant_state: eigensolver did not converge");
  }
  const ComplexVector& evals = solver.eigenvalues();

  std::vector<Index> unit_idx;
  double best_dist = 1e300;
  for (Index i = 0; i < evals.size(); ++i) {
    const double d = std::abs(evals(i) - Complex(1.0, 0.0));
    best_dist = std::min(best_dist, d);
    if (d <= kUnitEigTol) unit_idx.push_back(i);
  }
  if (unit_idx.empty()) {
    throw InvalidValueError(
        "invariant_state: no eigenvalue within 1e-6 of 1 (closest distance " +
        std::to_string(best_dist) + "); input is not a valid channel superoperator");
  }

  // Among unit eigenvectors pick the one whose Hermitization carries the
  // most trace; a TP channel always has a trace-one fixed point in the
  // span, so the best candidate has trace bounded away from zero.
  ComplexMatrix best;
  double best_tr = -1.0;
  for (Index i : unit_idx) {
    auto [h, atr] = hermitized_candidate(solver.eigenvectors().col(i));
    if (atr > best_tr) {
      best_tr = atr;
      best = std::move(h);
    }
  }
  if (best_tr <= 1e-12) {
    throw NumericalError("invariant_state: all unit eigenvectors are traceless");
  }
  best /= best.trace().real();

  // Clip tiny negative eigenvalues from roundoff; large ones mean the
  // candidate was not a state, in which case averaging channel iterates
  // of the clipped candidate recovers a genuine fixed point.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> herm(best);
  RealVector lam = herm.eigenvalues();
  const double most_negative = lam.minCoeff();
  ComplexMatrix sigma;
  if (most_negative >= -kPsdTol) {
    sigma = best;
  } else {
    lam = lam.cwiseMax(0.0);
    sigma = herm.eigenvectors() * lam.asDiagonal() * herm.eigenvectors().adjoint();
    sigma /= sigma.trace().real();
    if (most_negative < -1e-6) {
      ComplexVector v = vectorize(sigma);
      ComplexVector acc = ComplexVector::Zero(v.size());
      constexpr int kAvgSteps = 256;
      for (int t = 0; t < kAvgSteps; ++t) {
        v = s.mat * v;
        acc += v;
      }
      sigma = devectorize(acc / double(kAvgSteps));
      sigma = 0.5 * (sigma + sigma.adjoint().eval());
      sigma /= sigma.trace().real();
    }
  }

  InvariantStateResult out{DensityMatrix(std::move(sigma)),
                           unit_idx.size() == 1,
                           static_cast<int>(unit_idx.size()), 0.0};
  ComplexVector vs = vectorize(out.state.mat());
  out.residual = (devectorize(ComplexVector(s.mat * vs)) - out.state.mat()).norm();
  return out;
}

ComplexMatrix jamiolkowski(const Superoperator& s) {
  const Index n = s.dim;
  ComplexMatrix j(n * n, n * n);
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      for (Index l = 0; l < n; ++l) {
        for (Index jj = 0; jj < n; ++jj) {
          j(k * n + i, l * n + jj) = s.mat(k * n + l, i * n + jj);
        }
      }
    }
  }
  return j;
}

double tp_check_error(const ComplexMatrix& j) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(double(j.rows()))));
  if (n * n != j.rows() || j.rows() != j.cols()) {
    throw InvalidDimsError("tp_check: matrix is not a square of a square dimension");
  }
  ComplexMatrix tr1 = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    tr1 += j.block(k * n, k * n, n, n);
  }
  return max_abs(tr1 - ComplexMatrix::Identity(n, n));
}

bool tp_check(const ComplexMatrix& j) { return tp_check_error(j) <= 1e-10; }

Complex leading_eigenvalue_estimate(const KrausChannel& ch, int iters) {
  const Index n = ch.dim();
  ComplexMatrix x = ComplexMatrix::Identity(n, n) / double(n);
  // Deterministic non-symmetric perturbation so the start overlaps
  // non-diagonal eigenspaces as well.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      x(i, j) += Complex(0.01 * double((i * 31 + j * 17) % 7 - 3),
                         0.01 * double((i * 13 + j * 29) % 5 - 2)) / double(n);
    }
  }
  x /= x.norm();
  ComplexMatrix next, scratch(n, n);
  Complex rayleigh(0.0, 0.0);
  for (int t = 0; t < iters; ++t) {
    ch.apply_into(x, next, scratch);
    const Complex num = (x.adjoint() * next).trace();
    const Complex den = (x.adjoint() * x).trace();
    rayleigh = num / den;
    const double nn = next.norm();
    if (nn == 0.0) return Complex(0.0, 0.0);
    x = next / nn;
  }
  return rayleigh;
}

}  // namespace dtqmc
