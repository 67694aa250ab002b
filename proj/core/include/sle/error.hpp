#pragma once

#include <stdexcept>
#include <string>

namespace sle {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  ok = 0,
  usage = 2,
  numerical = 3,
  resource = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

// Invalid input parameters (non-positive kappa, eps >= Im z, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

// Operation called on an object in the wrong state (e.g. a swallowed point).
class StateError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

// Not enough usable data, e.g. fewer than three positive points in a fit.
class DataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

// The trace is too coarse for the requested length scales.
class ResolutionError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

class ResourceError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::resource; }
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ParameterError(what);
}

}  // namespace sle
