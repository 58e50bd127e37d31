#pragma once

// Shared description of sums over Z^2 of the shape
//   scale * sigma(m,n) * P(x,y) * F(Q(x,y)),  x = a1*m + b1,  y = a2*n + b2,
// used both for binary theta series (F = q^Q) and for lattice sums
// (F = Q^-power).
//
// Text form, fields separated by ';' (all but P optional):
//   P=(y-i*x)^4; Q=1,0,1; x=2m; y=2n+1; sign=(-1)^m; scale=1/2; power=4; origin=exclude

#include "elv/poly.hpp"

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace elv {

/// x = scale * index + offset.
struct AffineIndex {
  long scale = 1;
  long offset = 0;
  long at(long index) const { return scale * index + offset; }
  friend bool operator==(const AffineIndex&, const AffineIndex&) = default;
};

/// sigma(m,n) = (-1)^(m*[use_m] + n*[use_n] + [negate]) on the raw indices.
struct SignCharacter {
  bool use_m = false;
  bool use_n = false;
  bool negate = false;

  int at(long m, long n) const {
    long e = (use_m ? m : 0) + (use_n ? n : 0) + (negate ? 1 : 0);
    return (e % 2 == 0) ? 1 : -1;
  }
  bool trivial() const { return !use_m && !use_n; }
  friend bool operator==(const SignCharacter&, const SignCharacter&) = default;
};

struct BinaryFormSpec {
  Poly2 numerator;
  /// Q(x,y) = qa x^2 + qb x y + qc y^2, positive definite.
  long qa = 1, qb = 0, qc = 1;
  AffineIndex x, y;
  SignCharacter sign;
  mpq_class scale = 1;
  int power = 1;
  bool exclude_origin = true;

  /// Q at integer (x, y); exact.
  mpz_class form_at(const mpz_class& xv, const mpz_class& yv) const {
    return qa * xv * xv + qb * xv * yv + qc * yv * yv;
  }
  friend bool operator==(const BinaryFormSpec&, const BinaryFormSpec&) = default;
};

/// Throws parse_error on malformed text or a non-positive-definite form.
BinaryFormSpec parse_binary_form(std::string_view text);
std::string format_binary_form(const BinaryFormSpec& spec);

}  // namespace elv
