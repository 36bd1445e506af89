#pragma once

#include <stdexcept>
#include <string>

namespace bbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, mismatched shapes, malformed or incomplete run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string field = {})
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Grid whose largest resolved wavenumber is below the first dyadic annulus.
class DegenerateGridError : public Error {
 public:
  using Error::Error;
};

/// Bore transition does not fit between the periodization buffers.
class DomainTooSmallError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula (e.g. nonpositive input).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A time derivative or a ledger entry became NaN/Inf.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time)
      : Error(what + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace bbm
