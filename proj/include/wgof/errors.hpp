#pragma once

#include <stdexcept>
#include <string>

namespace wgof {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown statistic, bad tuning parameter, bad flag.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or empty input data.
class DataError : public Error {
 public:
  DataError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Numerical failure: non-convergence, overflow, unreached tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Fewer than two uncensored observations.
class InsufficientEventsError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Likelihood has no finite maximiser (all uncensored times equal).
class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A censoring target proportion that cannot be reached.
class CalibrationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace wgof
