#pragma once

#include <stdexcept>
#include <string>

namespace paoi {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quadrature or other numerical routine failed to meet its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Queue with utilization >= 1 where a steady-state formula was requested.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// Not enough observations for an estimator.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Malformed configuration; carries the JSON path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace paoi
