#pragma once

#include <stdexcept>
#include <string>

namespace malab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs of an operation was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The parameters sit on (or numerically too close to) a degenerate case,
/// e.g. a near-resonant exponent in the radial expansion.
class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

/// An iterative or adaptive numerical procedure failed to reach its target.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// An empirical certificate (envelope, drift, decay) could not be established.
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace malab
