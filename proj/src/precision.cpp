#include "elv/precision.hpp"

#include "elv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace elv {

namespace {
constexpr double kLog2Of10 = 3.32192809488736234787;
}

mpfr_prec_t digits_to_bits(int digits) noexcept {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + 8;
}

int bits_to_digits(mpfr_prec_t bits) noexcept {
  return static_cast<int>(std::floor(static_cast<double>(bits) / kLog2Of10));
}

PrecisionContext::PrecisionContext(int target_digits, int guard_digits, unsigned threads)
    : target_(target_digits), guard_(guard_digits), threads_(threads == 0 ? 1 : threads) {
  if (target_digits < 1) throw domain_error("target_digits must be positive");
  if (guard_digits < 10) throw domain_error("guard_digits must be at least 10");
}

mpfr_prec_t PrecisionContext::bits() const noexcept { return digits_to_bits(working_digits()); }

PrecisionContext PrecisionContext::with_target(int target_digits) const {
  return PrecisionContext(target_digits, guard_, threads_);
}
PrecisionContext PrecisionContext::with_guard(int guard_digits) const {
  return PrecisionContext(target_, guard_digits, threads_);
}
PrecisionContext PrecisionContext::with_threads(unsigned threads) const {
  return PrecisionContext(target_, guard_, threads);
}

// ---------------------------------------------------------------- Real

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

Real::Real(double value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

Real::Real(const mpz_class& value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& value, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(std::string_view text, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  std::string s(text);
  if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw parse_error("not a decimal number: " + s);
  }
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.bits());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  // Leave `other` valid at minimal precision.
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.bits());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::with_bits(mpfr_prec_t bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

mpz_class Real::round_to_integer() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

std::string Real::to_string(int significant_digits) const {
  if (is_nan()) return "nan";
  if (!is_finite()) return sign() > 0 ? "inf" : "-inf";
  significant_digits = std::max(significant_digits, 1);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", significant_digits - 1, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

void Real::ensure_bits(mpfr_prec_t bits) {
  if (bits > this->bits()) mpfr_prec_round(v_, bits, MPFR_RNDN);
}

Real Real::operator-() const {
  Real r(bits());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& rhs) {
  ensure_bits(rhs.bits());
  mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  ensure_bits(rhs.bits());
  mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  ensure_bits(rhs.bits());
  mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  ensure_bits(rhs.bits());
  mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator+=(long rhs) {
  mpfr_add_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(long rhs) {
  mpfr_sub_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

Real operator-(long a, const Real& b) {
  Real r(b.bits());
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(long a, const Real& b) {
  Real r(b.bits());
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (a.is_nan()) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

// ---------------------------------------------------------------- functions

#define ELV_UNARY(name, fn)                 \
  Real name(const Real& x) {                \
    Real r(x.bits());                       \
    fn(r.raw(), x.get(), MPFR_RNDN);        \
    return r;                               \
  }

ELV_UNARY(abs, mpfr_abs)
ELV_UNARY(sqrt, mpfr_sqrt)
ELV_UNARY(cbrt, mpfr_cbrt)
ELV_UNARY(exp, mpfr_exp)
ELV_UNARY(expm1, mpfr_expm1)
ELV_UNARY(log, mpfr_log)
ELV_UNARY(log10, mpfr_log10)
ELV_UNARY(sin, mpfr_sin)
ELV_UNARY(cos, mpfr_cos)
ELV_UNARY(tan, mpfr_tan)
ELV_UNARY(sinh, mpfr_sinh)
ELV_UNARY(cosh, mpfr_cosh)
ELV_UNARY(tanh, mpfr_tanh)
ELV_UNARY(asinh, mpfr_asinh)

#undef ELV_UNARY

Real floor(const Real& x) {
  Real r(x.bits());
  mpfr_floor(r.raw(), x.get());
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r(std::max(x.bits(), y.bits()));
  mpfr_pow(r.raw(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(x.bits());
  mpfr_pow_si(r.raw(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const mpq_class& exponent) {
  if (exponent.get_den() == 1) {
    if (exponent.get_num().fits_slong_p()) return pow(x, exponent.get_num().get_si());
  }
  if (exponent.get_den() == 2 && exponent.get_num().fits_slong_p()) {
    return pow(sqrt(x), exponent.get_num().get_si());
  }
  Real e(exponent, x.bits());
  return pow(x, e);
}

Real atan2(const Real& y, const Real& x) {
  Real r(std::max(x.bits(), y.bits()));
  mpfr_atan2(r.raw(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r(std::max(x.bits(), y.bits()));
  mpfr_hypot(r.raw(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real ldexp(const Real& x, long e) {
  Real r(x.bits());
  mpfr_mul_2si(r.raw(), x.get(), e, MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------- constants

namespace {

enum class ConstKind { pi, log, zeta, gamma, lngamma };
using ConstKey = std::tuple<ConstKind, long, long, mpfr_prec_t>;

template <class Compute>
Real cached(const ConstKey& key, Compute compute) {
  static std::mutex mutex;
  static std::map<ConstKey, Real> table;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
  }
  Real value = compute();
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = table.emplace(key, value);
  return it->second;
}

}  // namespace

Real const_pi(mpfr_prec_t bits) {
  return cached({ConstKind::pi, 0, 0, bits}, [bits] {
    Real r(bits);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
  });
}

Real const_log(unsigned long n, mpfr_prec_t bits) {
  return cached({ConstKind::log, static_cast<long>(n), 1, bits}, [n, bits] {
    Real r(static_cast<long>(n), bits);
    mpfr_log(r.raw(), r.get(), MPFR_RNDN);
    return r;
  });
}

Real const_zeta(unsigned long n, mpfr_prec_t bits) {
  return cached({ConstKind::zeta, static_cast<long>(n), 1, bits}, [n, bits] {
    Real r(bits);
    mpfr_zeta_ui(r.raw(), n, MPFR_RNDN);
    return r;
  });
}

Real const_gamma(long p, long q, mpfr_prec_t bits) {
  if (q <= 0 || p <= 0) throw domain_error("const_gamma expects a positive rational");
  return cached({ConstKind::gamma, p, q, bits}, [p, q, bits] {
    Real r(bits);
    mpq_class a(p, q);
    a.canonicalize();
    Real x(a, bits + 16);
    mpfr_gamma(r.raw(), x.get(), MPFR_RNDN);
    return r;
  });
}

Real const_lngamma(long p, long q, mpfr_prec_t bits) {
  if (q <= 0 || p <= 0) throw domain_error("const_lngamma expects a positive rational");
  return cached({ConstKind::lngamma, p, q, bits}, [p, q, bits] {
    Real r(bits);
    mpq_class a(p, q);
    a.canonicalize();
    Real x(a, bits + 16);
    mpfr_lngamma(r.raw(), x.get(), MPFR_RNDN);
    return r;
  });
}

// ---------------------------------------------------------------- Complex

Complex& Complex::operator+=(const Complex& z) {
  re += z.re;
  im += z.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& z) {
  re -= z.re;
  im -= z.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& z) {
  Real r = re * z.re - im * z.im;
  Real i = re * z.im + im * z.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
Complex& Complex::operator/=(const Complex& z) {
  // Smith's algorithm keeps intermediates in range.
  if (abs(z.re) >= abs(z.im)) {
    Real t = z.im / z.re;
    Real d = z.re + z.im * t;
    Real r = (re + im * t) / d;
    Real i = (im - re * t) / d;
    re = std::move(r);
    im = std::move(i);
  } else {
    Real t = z.re / z.im;
    Real d = z.re * t + z.im;
    Real r = (re * t + im) / d;
    Real i = (im * t - re) / d;
    re = std::move(r);
    im = std::move(i);
  }
  return *this;
}
Complex& Complex::operator*=(const Real& r) {
  re *= r;
  im *= r;
  return *this;
}
Complex& Complex::operator/=(const Real& r) {
  re /= r;
  im /= r;
  return *this;
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real abs(const Complex& z) { return hypot(z.re, z.im); }

Complex pow(const Complex& z, long n) {
  if (n < 0) {
    Complex one(Real(1L, z.bits()), Real(z.bits()));
    return one / pow(z, -n);
  }
  Complex result(Real(1L, z.bits()), Real(z.bits()));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

// ---------------------------------------------------------------- comparison

int digits_agreement(const Real& x, const Real& y) {
  const int cap = std::min(x.digits(), y.digits());
  if (x == y) return cap;
  mpfr_prec_t bits = std::max(x.bits(), y.bits());
  Real diff = abs(x.with_bits(bits) - y.with_bits(bits));
  Real scale = max(max(abs(x), abs(y)), Real(1L, bits));
  Real ratio = diff / scale;
  if (ratio.is_zero()) return cap;
  double d = std::floor(-log10(ratio).to_double());
  if (!(d > 0)) return 0;
  return static_cast<int>(std::min<double>(d, cap));
}

std::optional<mpq_class> to_rational(const Real& x, const mpz_class& max_denominator,
                                     std::optional<int> accurate_digits) {
  if (!x.is_finite() || max_denominator < 1) return std::nullopt;
  const mpfr_prec_t bits = x.bits();
  const int digits = accurate_digits.value_or(x.digits());
  Real tol = pow(Real(10L, bits), static_cast<long>(-(digits - 8)));
  tol *= max(Real(1L, bits), abs(x));

  // Convergents p_k/q_k of the continued fraction of x.
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p_cur, q_cur;
  Real rest = x;
  for (int iter = 0; iter < 4 * static_cast<int>(bits); ++iter) {
    Real fl = floor(rest);
    mpz_class a = fl.round_to_integer();
    if (iter == 0) {
      p_cur = a;
      q_cur = 1;
    } else {
      mpz_class p_next = a * p_cur + p_prev;
      mpz_class q_next = a * q_cur + q_prev;
      p_prev = p_cur;
      q_prev = q_cur;
      p_cur = p_next;
      q_cur = q_next;
    }
    if (q_cur > max_denominator) return std::nullopt;
    Real approx(mpq_class(p_cur, q_cur), bits);
    if (abs(x - approx) <= tol) {
      mpq_class r(p_cur, q_cur);
      r.canonicalize();
      return r;
    }
    Real frac = rest - fl;
    if (frac.is_zero()) return std::nullopt;
    rest = 1L / frac;
  }
  return std::nullopt;
}

}  // namespace elv
