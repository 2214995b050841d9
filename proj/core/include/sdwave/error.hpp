#pragma once

#include <stdexcept>
#include <string>

namespace sdwave {

/// Invalid configuration value; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite or runaway values detected in a field.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  /// Time level at which the blow-up was detected.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Iterative linear solve failed to reach its tolerance.
class SolverDivergenceError : public std::runtime_error {
 public:
  SolverDivergenceError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  /// Last time level with a valid state.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace sdwave
