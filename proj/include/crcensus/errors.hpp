#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crcensus {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the admissible range (nonpositive dilation, beta not in [2,4), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at the excluded point (0,-1) of the Cayley chart.
class PoleError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

// Two computations that must agree did not; signals a bug rather than bad input.
class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, double best_error)
      : Error(what), best_value_(best_value), best_error_(best_error) {}

  double best_value() const noexcept { return best_value_; }
  double best_error() const noexcept { return best_error_; }

 private:
  double best_value_;
  double best_error_;
};

class DegenerateProfile : public Error {
 public:
  using Error::Error;
};

// Least eigenvalue inside the +-pd_margin band: condition (C) cannot be decided.
class MarginalCase : public Error {
 public:
  MarginalCase(const std::string& what, double rho) : Error(what), rho_(rho) {}
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

class ConditionCViolation : public Error {
 public:
  ConditionCViolation(const std::string& what, std::vector<std::string> subset, double rho)
      : Error(what), subset_(std::move(subset)), rho_(rho) {}
  const std::vector<std::string>& subset() const noexcept { return subset_; }
  double rho() const noexcept { return rho_; }

 private:
  std::vector<std::string> subset_;
  double rho_;
};

// Outside the validity region of the asymptotic expansion.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class ChartError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace crcensus
