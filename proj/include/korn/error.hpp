#pragma once

#include <stdexcept>
#include <string>

namespace korn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, dimensions or orders that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked of an operator lacking the required structure
/// (zero operator, not maximal rank, not an annihilator pair, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input: JSON, file headers, parameter values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace korn
