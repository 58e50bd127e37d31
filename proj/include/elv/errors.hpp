#pragma once

#include <stdexcept>
#include <string>

namespace elv {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative method failed to converge (series, quadrature, PSLQ).
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Computation finished but below the requested accuracy. Carries the best
/// value attained as a decimal string plus the digits it is believed to hold.
class shortfall_error : public std::runtime_error {
 public:
  shortfall_error(const std::string& what, std::string best_value, int achieved_digits)
      : std::runtime_error(what), best_value_(std::move(best_value)), achieved_(achieved_digits) {}
  const std::string& best_value() const noexcept { return best_value_; }
  int achieved_digits() const noexcept { return achieved_; }

 private:
  std::string best_value_;
  int achieved_;
};

/// Malformed textual input (specs, recipes, closed forms).
class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace elv
