#pragma once

// Arbitrary-precision real/complex values, precision policy and comparison
// helpers. Values carry their own binary precision; there is no ambient
// precision state. MPFR does the limb-level work.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace elv {

/// Decimal digits requested by a caller plus guard digits for intermediate
/// loss. Passed explicitly to every numeric operation.
class PrecisionContext {
 public:
  explicit PrecisionContext(int target_digits, int guard_digits = 20, unsigned threads = 1);

  int target_digits() const noexcept { return target_; }
  int guard_digits() const noexcept { return guard_; }
  int working_digits() const noexcept { return target_ + guard_; }
  unsigned threads() const noexcept { return threads_; }

  /// Binary precision corresponding to working_digits().
  mpfr_prec_t bits() const noexcept;

  PrecisionContext with_target(int target_digits) const;
  PrecisionContext with_guard(int guard_digits) const;
  PrecisionContext with_threads(unsigned threads) const;
  /// Same target, guard doubled; used when a self-consistency check fails.
  PrecisionContext escalated() const { return with_guard(2 * guard_); }

 private:
  int target_;
  int guard_;
  unsigned threads_;
};

mpfr_prec_t digits_to_bits(int digits) noexcept;
int bits_to_digits(mpfr_prec_t bits) noexcept;

class Real {
 public:
  Real() : Real(static_cast<mpfr_prec_t>(64)) {}
  explicit Real(mpfr_prec_t bits);
  Real(long value, mpfr_prec_t bits);
  Real(int value, mpfr_prec_t bits) : Real(static_cast<long>(value), bits) {}
  Real(double value, mpfr_prec_t bits);
  Real(const mpz_class& value, mpfr_prec_t bits);
  Real(const mpq_class& value, mpfr_prec_t bits);
  /// Decimal or scientific literal, e.g. "3.14159" or "1e-30".
  Real(std::string_view text, mpfr_prec_t bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(v_); }
  int digits() const noexcept { return bits_to_digits(bits()); }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr raw() noexcept { return v_; }

  /// Copy rounded to a different precision.
  Real with_bits(mpfr_prec_t bits) const;

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  bool is_nan() const noexcept { return mpfr_nan_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const noexcept { return mpfr_get_si(v_, MPFR_RNDN); }
  mpz_class round_to_integer() const;
  /// Scientific notation with the given number of significant digits.
  std::string to_string(int significant_digits) const;
  std::string to_string() const { return to_string(digits()); }

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator+(long a, Real b) { return b += a; }
  friend Real operator*(long a, Real b) { return b *= a; }
  friend Real operator-(long a, const Real& b);
  friend Real operator/(long a, const Real& b);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b);

 private:
  void ensure_bits(mpfr_prec_t bits);
  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real cbrt(const Real& x);
Real exp(const Real& x);
Real expm1(const Real& x);
Real log(const Real& x);
Real log10(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real pow(const Real& x, const mpq_class& exponent);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real tanh(const Real& x);
Real asinh(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real floor(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
/// 2^e as a Real, exact.
Real ldexp(const Real& x, long e);

/// Memoized constants, keyed by (constant, precision). Safe for concurrent use.
Real const_pi(mpfr_prec_t bits);
Real const_log(unsigned long n, mpfr_prec_t bits);
Real const_zeta(unsigned long n, mpfr_prec_t bits);
/// Gamma(p/q) for a positive rational argument.
Real const_gamma(long p, long q, mpfr_prec_t bits);
Real const_lngamma(long p, long q, mpfr_prec_t bits);

inline Real const_pi(const PrecisionContext& ctx) { return const_pi(ctx.bits()); }

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t bits() const noexcept { return re.bits(); }

  Complex& operator+=(const Complex& z);
  Complex& operator-=(const Complex& z);
  Complex& operator*=(const Complex& z);
  Complex& operator/=(const Complex& z);
  Complex& operator*=(const Real& r);
  Complex& operator/=(const Real& r);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  Complex operator-() const { return {-re, -im}; }
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Complex pow(const Complex& z, long n);
/// e^{i theta} scaled by e^{x}: exp(x + i theta).
Complex exp(const Complex& z);

/// Largest d >= 0 with |x - y| <= 10^-d * max(|x|, |y|, 1). Identical values
/// return the smaller of the two precisions (in decimal digits).
int digits_agreement(const Real& x, const Real& y);

/// Continued-fraction recovery of p/q with q <= max_denominator. A convergent
/// is accepted when |x - p/q| <= 10^(-accurate_digits + 8); accurate_digits
/// defaults to the precision x carries.
std::optional<mpq_class> to_rational(const Real& x, const mpz_class& max_denominator,
                                     std::optional<int> accurate_digits = std::nullopt);

}  // namespace elv
