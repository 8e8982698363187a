// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rfcap {

/// Malformed arguments: non-finite entries, dimension mismatches, empty inputs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix failed a structural precondition (Hermitian, positive definite, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// System dimensions outside the supported regime (n_rf < n_t, n_rf < n_r).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Receive degrees of freedom do not exceed the number of RF chains.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparsity patterns do not share a common effective rank, so the closed-form
/// mixture optimum does not apply.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown during evaluation (singular covariance, overflow).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Channel text could not be parsed. Line and column are 1-based; column 0
/// means the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace rfcap
