#pragma once

#include <stdexcept>
#include <string>

namespace gencur {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or action representations.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid caller-supplied arguments (empty inputs, out-of-range settings).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the declared action space.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Factorizations or iterations that failed numerically.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// No action satisfies the requested optimality constraint.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Kernel with zero amplitude, or a comparison between indistinguishable actions.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Violated internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gencur
