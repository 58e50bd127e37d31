#pragma once

// Bivariate polynomials in (x, y) with Gaussian-integer coefficients. Used as
// weights of binary theta series and as numerators of lattice sums.

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace elv {

struct GaussInt {
  mpz_class re;
  mpz_class im;

  bool is_zero() const { return re == 0 && im == 0; }
  GaussInt& operator+=(const GaussInt& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussInt&, const GaussInt&) = default;
};

class Poly2 {
 public:
  using Exponents = std::pair<int, int>;  // (deg x, deg y)

  Poly2() = default;
  static Poly2 constant(GaussInt c);
  static Poly2 x();
  static Poly2 y();

  const std::map<Exponents, GaussInt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_real() const;
  int total_degree() const;
  int degree_in_y() const;

  /// Value at integer (x, y); exact.
  GaussInt eval(const mpz_class& x, const mpz_class& y) const;
  /// Real part as a polynomial.
  Poly2 real_part() const;
  /// Coefficients of y^j after substituting a fixed x, as exact integers
  /// (real part only); index j.
  std::map<int, mpz_class> real_coeffs_in_y(const mpz_class& x) const;

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);
  Poly2 pow(int e) const;
  Poly2 operator-() const;

  friend bool operator==(const Poly2&, const Poly2&) = default;

  std::string to_string() const;

 private:
  void add_term(Exponents e, const GaussInt& c);
  std::map<Exponents, GaussInt> terms_;
};

/// Parses expressions such as "(y-i*x)^4", "x^2-2*y^2", "18*x*y".
/// Variables are x and y, i is the imaginary unit. Throws parse_error.
Poly2 parse_poly2(std::string_view text);

}  // namespace elv
