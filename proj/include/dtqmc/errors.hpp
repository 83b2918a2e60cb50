#pragma once

#include <stdexcept>
#include <string>

namespace dtqmc {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or subsystem-dimension mismatch.
struct InvalidDimsError : Error {
  using Error::Error;
};

// A value violates a construction invariant (non-Hermitian state,
// incomplete Kraus set, NaN entries, ...).
struct InvalidValueError : Error {
  using Error::Error;
};

// Requested operation exceeds a hard resource gate (e.g. dense
// superoperator materialization above the state-dimension limit).
struct CapabilityError : Error {
  using Error::Error;
};

// Eigensolver non-convergence, numerical degradation, or an analysis
// that failed to produce a result.
struct NumericalError : Error {
  using Error::Error;
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dtqmc
