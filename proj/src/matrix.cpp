#include "dtqmc/matrix.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace dtqmc {

bool is_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex& z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

double max_abs(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidDimsError("hermiticity_error: matrix is not square");
  }
  return max_abs(a - a.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SparseCMatrix kron_sparse(const SparseCMatrix& a, const SparseCMatrix& b) {
  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros()) *
                static_cast<std::size_t>(b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseCMatrix::InnerIterator ita(a, ka); ita; ++ita) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseCMatrix::InnerIterator itb(b, kb); itb; ++itb) {
          trips.emplace_back(ita.row() * b.rows() + itb.row(),
                             ita.col() * b.cols() + itb.col(),
                             ita.value() * itb.value());
        }
      }
    }
  }
  SparseCMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexVector vectorize(const ComplexMatrix& a) {
  ComplexVector v(a.rows() * a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      v(i * a.cols() + j) = a(i, j);
    }
  }
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(double(v.size()))));
  if (n * n != v.size()) {
    throw InvalidDimsError("devectorize: length " + std::to_string(v.size()) +
                           " is not a perfect square");
  }
  ComplexMatrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      a(i, j) = v(i * n + j);
    }
  }
  return a;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidDimsError("eigenvalues: matrix is not square");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalues: eigensolver did not converge");
  }
  const ComplexVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidDimsError("hermitian_eigenvalues: matrix is not square");
  }
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

SparseCMatrix to_sparse(const ComplexMatrix& a) {
  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> trips;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != Complex(0.0, 0.0)) {
        trips.emplace_back(i, j, a(i, j));
      }
    }
  }
  SparseCMatrix out(a.rows(), a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseCMatrix sparse_identity(Index n) {
  SparseCMatrix id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace dtqmc
