#pragma once

// Products rational * prod c^e over named constants: primes ("2", "3", ...),
// "pi", "Gamma(p/q)" and "log(n)". Surds are stored as fractional exponents
// on primes; canonical form keeps each prime exponent in [0, 1) and moves the
// integer part into the rational.
//
// Text form, e.g.  3*sqrt(2)*Gamma(1/4)^8/(64*pi^2)
//                  Gamma(1/4)^4/(256*pi) - 3*pi*log(2)/32

#include "elv/precision.hpp"

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace elv {

struct ClosedForm {
  mpq_class rational{1};
  std::map<std::string, mpq_class> exponents;  ///< constant name -> exponent, no zero entries

  /// Merges prime powers into the rational and drops zero exponents.
  void canonicalize();
  ClosedForm& operator*=(const ClosedForm& rhs);
  friend ClosedForm operator*(ClosedForm a, const ClosedForm& b) { return a *= b; }
  ClosedForm inverse() const;
  ClosedForm power(const mpq_class& e) const;

  friend bool operator==(const ClosedForm& a, const ClosedForm& b) {
    return a.rational == b.rational && a.exponents == b.exponents;
  }
};

/// Signed sum of products; most identities have a single term.
struct ClosedFormSum {
  std::vector<ClosedForm> terms;
};

ClosedForm parse_closed_form(std::string_view text);
ClosedFormSum parse_closed_form_sum(std::string_view text);
std::string format_closed_form(const ClosedForm& cf);
std::string format_closed_form_sum(const ClosedFormSum& s);

/// Value of one named constant; domain_error for an unknown name.
Real constant_value(std::string_view name, mpfr_prec_t bits);
bool is_known_constant(std::string_view name);

Real evaluate(const ClosedForm& cf, const PrecisionContext& ctx);
Real evaluate(const ClosedFormSum& s, const PrecisionContext& ctx);

}  // namespace elv
