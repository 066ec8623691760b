#pragma once

#include <stdexcept>
#include <string>

namespace parsim {

// Base class for everything this library throws on purpose. The CLI maps
// ParseError/IoError to exit code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownColumnError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NegativeRadiusError : public Error {
 public:
  using Error::Error;
};

// Raised when the large-N approximation of the error-norm moments is
// requested for a sample size where it is undefined (N < 2).
class ApproximationInvalidError : public Error {
 public:
  using Error::Error;
};

class NonPositiveBoundError : public Error {
 public:
  using Error::Error;
};

class NotUnivariateError : public Error {
 public:
  using Error::Error;
};

// A zero residual makes the marginalized evidence and the Student-t
// posterior diverge; callers must handle interpolating models explicitly.
class PerfectFitError : public Error {
 public:
  using Error::Error;
};

class NonPositiveSigmaError : public Error {
 public:
  using Error::Error;
};

class EmptyModelSetError : public Error {
 public:
  using Error::Error;
};

class InvalidPriorsError : public Error {
 public:
  using Error::Error;
};

class DimensionTooLargeError : public Error {
 public:
  using Error::Error;
};

// Semantic validation of user input (duplicate labels, mixed responses, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Syntactic errors in input files; messages carry file:line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace parsim
