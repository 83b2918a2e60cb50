#pragma once

#include <vector>

#include <Eigen/Eigenvalues>

#include "dtqmc/channel.hpp"
#include "dtqmc/randstates.hpp"

namespace dtqmc::testing {

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a - b);
}

// Arbitrary (non-structured) complex matrix with Gaussian entries.
inline ComplexMatrix random_matrix(Index n, GaussianRng& rng) {
  return ginibre(n, rng);
}

// Random CPTP channel: Ginibre blocks G_k whitened by the inverse square
// root of S = sum_k G_k^dagger G_k, so sum K^dagger K = 1 holds by
// construction.
inline KrausChannel random_channel(Index dim, int n_kraus, GaussianRng& rng) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(n_kraus);
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < n_kraus; ++k) {
    blocks.push_back(ginibre(dim, rng));
    s += blocks.back().adjoint() * blocks.back();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  const ComplexMatrix s_inv_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().adjoint();
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(n_kraus);
  for (const auto& g : blocks) kraus.push_back(g * s_inv_sqrt);
  return KrausChannel::from_dense(kraus);
}

// Haar-ish random unitary from the QR factorization of a Ginibre matrix.
inline ComplexMatrix random_unitary(Index n, GaussianRng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, rng));
  ComplexMatrix q = qr.householderQ();
  return q;
}

}  // namespace dtqmc::testing
