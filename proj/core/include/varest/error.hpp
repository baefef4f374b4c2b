#pragma once

#include <stdexcept>
#include <string>

namespace varest {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: too-short samples, bad sizes, non-finite values.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A population variate has zero variance where a normalization needs it.
class DegeneratePopulationError : public Error {
 public:
  DegeneratePopulationError(char variate, const std::string& what);
  [[nodiscard]] char variate() const noexcept { return variate_; }

 private:
  char variate_;
};

/// A drawn sample cannot be used by an estimator (e.g. s_x^2 == 0).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// Sampling-design violation: nesting, phase ordering, missing first phase.
class InvalidDesignError : public Error {
 public:
  using Error::Error;
};

/// The MSE is flat in the combination weight, so no unique minimizer exists.
class NoUniqueOptimumError : public Error {
 public:
  using Error::Error;
};

/// Population specification cannot be realized (e.g. correlation matrix not PD).
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// Text input that does not conform to a documented format.
class ParseError : public InvalidInputError {
 public:
  ParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Monte Carlo run exceeded its tolerated fraction of failed replications.
class SimulationAbortedError : public Error {
 public:
  using Error::Error;
};

}  // namespace varest
