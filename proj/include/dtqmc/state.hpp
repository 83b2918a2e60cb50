#pragma once

#include <vector>

#include "dtqmc/matrix.hpp"

namespace dtqmc {

// Construction tolerances for quantum states.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// Ordered subsystem dimensions of a composite space. Subsystem 0 is the
// leftmost (slowest-varying) tensor factor.
struct SubsystemDims {
  std::vector<Index> dims;

  SubsystemDims(std::initializer_list<Index> d) : dims(d) { validate(); }
  explicit SubsystemDims(std::vector<Index> d) : dims(std::move(d)) { validate(); }

  Index total() const;
  std::size_t count() const { return dims.size(); }

 private:
  void validate() const;
};

// Hermitian, positive semi-definite, trace-one matrix. The checked
// constructor enforces all three invariants up to the tolerances above;
// PSD is checked through the eigenvalue spectrum rather than a Cholesky
// factorization so that slightly negative eigenvalues from accumulated
// floating error (>= -1e-10) are accepted.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix mat);

  Index dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

  Complex operator()(Index i, Index j) const { return mat_(i, j); }

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis_state(Index dim, Index i);
  static DensityMatrix maximally_mixed(Index dim);

  // Wraps an already-trusted matrix after cheap checks only (finite,
  // Hermitian, trace); used on evolution hot paths where the full PSD
  // eigenvalue check would dominate the step cost.
  static DensityMatrix trusted(ComplexMatrix mat);

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix mat, Trusted);

  ComplexMatrix mat_;
};

// Partial trace over the given subsystem indices (a proper subset).
// Trace is preserved; the result lives on the kept factors in their
// original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemDims& dims,
                            const std::vector<int>& traced);
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemDims& dims,
                            const std::vector<int>& traced);

}  // namespace dtqmc
