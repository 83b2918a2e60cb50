#pragma once

#include <vector>

#include "dtqmc/matrix.hpp"
#include "dtqmc/state.hpp"

namespace dtqmc {

inline constexpr double kCompletenessTol = 1e-10;

// Dense materialization of an N^2 x N^2 superoperator is refused above
// this state dimension.
inline constexpr Index kMaxSuperoperatorStateDim = 64;

// Eigenvalues within this distance of 1 count as unit eigenvalues when
// locating invariant states (loose on purpose: eigensolvers lose digits
// on defective peripheral spectra).
inline constexpr double kUnitEigTol = 1e-6;

// A CPTP map in Kraus form: rho -> sum_k K_k rho K_k^dagger with
// sum_k K_k^dagger K_k = 1. Operators are held sparse; the queue-update
// operators are 0/1 partial isometries and coin operators act trivially
// on the queue register, so dense storage would be mostly zeros.
class KrausChannel {
 public:
  KrausChannel(Index dim, std::vector<SparseCMatrix> ops);

  static KrausChannel from_dense(const std::vector<ComplexMatrix>& ops);
  static KrausChannel identity(Index dim);

  Index dim() const { return dim_; }
  std::size_t size() const { return ops_.size(); }
  const SparseCMatrix& op(std::size_t k) const { return ops_[k]; }
  ComplexMatrix dense_op(std::size_t k) const { return ComplexMatrix(ops_[k]); }
  std::vector<ComplexMatrix> dense_ops() const;

  // Frobenius norm of sum_k K_k^dagger K_k - 1.
  double completeness_error() const;

  // Matrix-free application; never materializes the superoperator.
  DensityMatrix apply(const DensityMatrix& rho) const;
  ComplexMatrix apply_matrix(const ComplexMatrix& x) const;

  // Allocation-free form for evolution loops: out = Phi(x), scratch is
  // resized as needed.
  void apply_into(const ComplexMatrix& x, ComplexMatrix& out,
                  ComplexMatrix& scratch) const;

 private:
  Index dim_;
  std::vector<SparseCMatrix> ops_;
  std::vector<SparseCMatrix> adj_;  // cached adjoints
};

// Kraus set of the composition outer . inner: all pairwise products
// {A_i B_j}, without Kraus-rank minimization.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

// Matrix form acting on row-stacked vectorized states:
// mat = sum_k K_k (x) conj(K_k), so mat * vec(rho) = vec(Phi(rho)).
struct Superoperator {
  Index dim;          // state dimension N
  ComplexMatrix mat;  // N^2 x N^2
};

Superoperator superoperator(const KrausChannel& ch);

// Same matrix in sparse form, for iteration at dimensions where the
// dense gate would bite. Subject to no gate; callers own the memory
// trade-off.
SparseCMatrix superoperator_sparse(const KrausChannel& ch);

// Spectrum of a channel superoperator, ordered by descending modulus
// (ties broken by descending real then imaginary part).
//   kUniqueUnit: exactly one eigenvalue of modulus > 1 - 1e-9; the
//     channel relaxes to a unique invariant state from any input.
//   kDegenerate: several peripheral eigenvalues; limits may depend on
//     the initial state or fail to exist.
struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  int n_unit_modulus = 0;
  enum class Case { kUniqueUnit, kDegenerate } classification = Case::kDegenerate;
};

SpectrumReport spectrum(const Superoperator& s);

struct InvariantStateResult {
  DensityMatrix state;
  bool unique = true;       // false when the unit eigenspace has dim > 1
  int unit_multiplicity = 1;
  double residual = 0.0;    // Frobenius norm of Phi(sigma) - sigma
};

// A fixed point sigma with Phi(sigma) = sigma, extracted from the
// unit-eigenvalue eigenvector: Hermitized as (s + s^dagger)/2, phase
// fixed so the trace is real positive, normalized to trace one. With a
// degenerate unit eigenspace one element is returned and flagged.
InvariantStateResult invariant_state(const Superoperator& s);

// Jamiolkowski representation by index reshuffle:
// J[(k,i),(l,j)] = S[(k,l),(i,j)]. Equals sum_k vec(K_k) vec(K_k)^dagger.
ComplexMatrix jamiolkowski(const Superoperator& s);

// Trace over the first tensor factor of J equals the identity iff the
// represented map is trace preserving.
double tp_check_error(const ComplexMatrix& j);
bool tp_check(const ComplexMatrix& j);

// Leading eigenvalue estimate by power iteration on the matrix-free
// apply, for systems past the dense gate. Returns the Rayleigh quotient
// after `iters` steps.
Complex leading_eigenvalue_estimate(const KrausChannel& ch, int iters = 200);

}  // namespace dtqmc
