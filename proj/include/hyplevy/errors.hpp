#pragma once

#include <stdexcept>
#include <string>

namespace hyplevy {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument lies within pole tolerance of a Gamma or exponent pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Invalid function parameter (e.g. 2F1 lower parameter at a nonpositive integer).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Series or iteration ran out of budget before meeting its tail bound.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Parameter quadruple belongs to none of the admissible regimes.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// Root/pole sequences that fail to alternate.
class InterlacingError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mixture truncation too short for the requested point.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a different regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// The requested value is +infinity (e.g. potential density at 0).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyplevy
