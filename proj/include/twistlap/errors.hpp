#pragma once

#include <stdexcept>
#include <string>

namespace twistlap {

// Bad input to a constructor, assembler or solver (exit code 2 in the CLI).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the hypotheses of a closed-form result, e.g. a bound that
// needs negative degree or a square root of a negative radicand.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative solver gave up; carries the best residual it reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

// An eigenpair handed to a post-processing routine does not satisfy its
// eigen-equation tightly enough to be trusted.
class StaleEigenpair : public std::runtime_error {
 public:
  StaleEigenpair(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace twistlap
