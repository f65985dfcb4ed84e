#pragma once

#include <stdexcept>
#include <string>

namespace behametric {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent setup: mixed top bounds, unsupported node/bound combination,
/// missing valuation for a constant space.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A document, F-structure or table violates its schema or invariants.
/// `path()` points into the offending document ("" when not applicable).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string path = {})
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive oracle was asked for an instance larger than its budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace behametric
