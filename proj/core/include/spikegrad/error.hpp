#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spikegrad {

// Root of every exception thrown by the library. Subclasses map onto the
// CLI exit-code classes (config / data / numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix dimensions that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (IDX, checkpoint, CSV).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Operation requested on a state that does not support it yet.
class StateError : public Error {
 public:
  using Error::Error;
};

// Non-finite value produced by the dynamics themselves.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A derived quantity could not be computed from the given data.
class ComputationError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure produced a non-finite value. `iteration` is the
// index at which it was detected.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace spikegrad
