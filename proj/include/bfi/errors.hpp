#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bfi {

/// Invalid argument to a numerical or model operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method ran out of its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Root finder was given (or could not grow) a sign-changing bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The k = 0 exceedance probability does not exceed p0, so the fragility
/// index is undefined for this analysis.
class NotFragileApplicable : public std::runtime_error {
 public:
  NotFragileApplicable(double initial_prob, double p0)
      : std::runtime_error("initial probability " + std::to_string(initial_prob) +
                           " does not exceed p0 = " + std::to_string(p0)),
        initial_prob_(initial_prob),
        p0_(p0) {}

  double initial_prob() const noexcept { return initial_prob_; }
  double p0() const noexcept { return p0_; }

 private:
  double initial_prob_;
  double p0_;
};

/// Malformed input file. Row and column are 1-based; 0 means "not applicable".
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace bfi
