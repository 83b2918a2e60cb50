#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dtqmc/errors.hpp"

namespace dtqmc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;
using Index = Eigen::Index;

// True iff every entry has finite real and imaginary part.
bool is_finite(const ComplexMatrix& a);

// Largest entrywise absolute value.
double max_abs(const ComplexMatrix& a);

// max_ij |a - a^dagger|.
double hermiticity_error(const ComplexMatrix& a);

// Kronecker product: entry ((i*b.rows+k),(j*b.cols+l)) = a(i,j)*b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
SparseCMatrix kron_sparse(const SparseCMatrix& a, const SparseCMatrix& b);

// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& a);

// Row-stacking vectorization: vec(a)(i*cols + j) = a(i, j). With this
// convention, vec(E rho E^dagger) = (E (x) conj(E)) vec(rho), so channel
// superoperators take the form sum_k E_k (x) conj(E_k).
ComplexVector vectorize(const ComplexMatrix& a);

// Inverse of vectorize for square matrices; throws InvalidDimsError if
// the length is not a perfect square.
ComplexMatrix devectorize(const ComplexVector& v);

// All eigenvalues of a square complex matrix, with multiplicity,
// in no particular order.
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

// Eigenvalues of a Hermitian matrix, ascending. Input is symmetrized
// as (a + a^dagger)/2 before the solve.
RealVector hermitian_eigenvalues(const ComplexMatrix& a);

SparseCMatrix to_sparse(const ComplexMatrix& a);
SparseCMatrix sparse_identity(Index n);

}  // namespace dtqmc
