#include "dtqmc/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dtqmc {

void SubsystemDims::validate() const {
  if (dims.empty()) {
    throw InvalidDimsError("SubsystemDims: no subsystems given");
  }
  for (Index d : dims) {
    if (d < 1) {
      throw InvalidDimsError("SubsystemDims: nonpositive subsystem dimension");
    }
  }
}

Index SubsystemDims::total() const {
  Index t = 1;
  for (Index d : dims) t *= d;
  return t;
}

namespace {

void check_state_cheap(const ComplexMatrix& mat) {
  if (mat.rows() != mat.cols() || mat.rows() < 1) {
    throw InvalidDimsError("DensityMatrix: matrix must be square and nonempty");
  }
  if (!is_finite(mat)) {
    throw InvalidValueError("DensityMatrix: non-finite entries");
  }
  const double herm = hermiticity_error(mat);
  if (herm > kHermitianTol) {
    throw InvalidValueError("DensityMatrix: Hermiticity violation " +
                            std::to_string(herm));
  }
  const double tr_err = std::abs(mat.trace() - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    throw InvalidValueError("DensityMatrix: trace deviates from 1 by " +
                            std::to_string(tr_err));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  check_state_cheap(mat_);
  const RealVector evals = hermitian_eigenvalues(mat_);
  if (evals.minCoeff() < -kPsdTol) {
    throw InvalidValueError("DensityMatrix: negative eigenvalue " +
                            std::to_string(evals.minCoeff()));
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, Trusted) : mat_(std::move(mat)) {
  check_state_cheap(mat_);
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix mat) {
  return DensityMatrix(std::move(mat), Trusted{});
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0 || !std::isfinite(n)) {
    throw InvalidValueError("DensityMatrix::pure: vector has invalid norm");
  }
  ComplexVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index i) {
  if (i < 0 || i >= dim) {
    throw InvalidDimsError("DensityMatrix::basis_state: index out of range");
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, i) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim < 1) throw InvalidDimsError("maximally_mixed: dim must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / double(dim));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemDims& dims,
                            const std::vector<int>& traced) {
  const std::size_t k = dims.count();
  if (m.rows() != m.cols() || m.rows() != dims.total()) {
    throw InvalidDimsError("partial_trace: matrix dimension does not match subsystems");
  }
  std::vector<bool> is_traced(k, false);
  for (int t : traced) {
    if (t < 0 || static_cast<std::size_t>(t) >= k) {
      throw InvalidDimsError("partial_trace: subsystem index out of range");
    }
    if (is_traced[t]) {
      throw InvalidDimsError("partial_trace: duplicate subsystem index");
    }
    is_traced[t] = true;
  }
  if (traced.size() >= k) {
    throw InvalidDimsError("partial_trace: traced set must be a proper subset");
  }

  // Strides of each subsystem in the full lexicographic index.
  std::vector<Index> stride(k, 1);
  for (std::size_t s = k; s-- > 1;) {
    stride[s - 1] = stride[s] * dims.dims[s];
  }

  std::vector<std::size_t> kept, gone;
  for (std::size_t s = 0; s < k; ++s) {
    (is_traced[s] ? gone : kept).push_back(s);
  }
  Index kept_dim = 1, gone_dim = 1;
  for (auto s : kept) kept_dim *= dims.dims[s];
  for (auto s : gone) gone_dim *= dims.dims[s];

  // Maps a flat kept (resp. traced) index to its offset in the full index.
  auto offsets = [&](const std::vector<std::size_t>& subs, Index flat_dim) {
    std::vector<Index> off(static_cast<std::size_t>(flat_dim));
    for (Index f = 0; f < flat_dim; ++f) {
      Index rem = f, o = 0;
      for (std::size_t s = subs.size(); s-- > 0;) {
        const Index d = dims.dims[subs[s]];
        o += (rem % d) * stride[subs[s]];
        rem /= d;
      }
      off[static_cast<std::size_t>(f)] = o;
    }
    return off;
  };
  const std::vector<Index> kept_off = offsets(kept, kept_dim);
  const std::vector<Index> gone_off = offsets(gone, gone_dim);

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Index a = 0; a < kept_dim; ++a) {
    for (Index b = 0; b < kept_dim; ++b) {
      Complex acc(0.0, 0.0);
      for (Index s = 0; s < gone_dim; ++s) {
        acc += m(kept_off[a] + gone_off[s], kept_off[b] + gone_off[s]);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemDims& dims,
                            const std::vector<int>& traced) {
  return DensityMatrix(partial_trace(rho.mat(), dims, traced));
}

}  // namespace dtqmc
