#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "elv/precision.hpp"

#include <thread>

using namespace elv;

TEST_CASE("context derives working precision and escalates the guard") {
  PrecisionContext c(40);
  CHECK(c.working_digits() == 60);
  CHECK(c.bits() >= digits_to_bits(60));
  CHECK(c.escalated().guard_digits() == 40);
  CHECK(c.escalated().target_digits() == 40);
  CHECK(c.with_target(70).working_digits() == 90);
}

TEST_CASE("digits_agreement") {
  const mpfr_prec_t b = digits_to_bits(50);
  CHECK(digits_agreement(Real("1.0000", b), Real("1.0001", b)) == 4);

  const Real x("2.718281828459045235360287471352662497757", b);
  CHECK(digits_agreement(x, x) == bits_to_digits(b));

  // pi - 355/113 = 2.67e-7 <= 10^-7 * pi, by plain subtraction
  const Real pi = const_pi(b);
  const Real approx = Real(355L, b) / 113L;
  CHECK(digits_agreement(pi, approx) == 7);
  const Real diff = abs(pi - approx);
  CHECK(diff < pi * Real("1e-7", b));
  CHECK(diff > pi * Real("1e-8", b));

  SUBCASE("symmetric and monotone under truncation") {
    const Real e = exp(Real(1L, b));
    int prev = 1000;
    for (int d = 45; d >= 5; d -= 5) {
      const Real t(e.to_string(d), b);
      CHECK(digits_agreement(e, t) == digits_agreement(t, e));
      const int a = digits_agreement(e, t);
      CHECK(a <= prev);
      CHECK(a >= d - 1);
      prev = a;
    }
  }
}

TEST_CASE("to_rational") {
  const mpfr_prec_t b = digits_to_bits(30);
  CHECK(to_rational(Real(1L, b) / 3L, 100) == mpq_class(1, 3));
  CHECK(to_rational(Real("0.333333333333333333333333333333", b), 100, 30) == mpq_class(1, 3));
  // pi: no convergent with denominator <= 50 lies within 10^-22
  CHECK_FALSE(to_rational(const_pi(b), 50, 30).has_value());
  CHECK(to_rational(Real(-22L, b) / 7L, 10) == mpq_class(-22, 7));
}

TEST_CASE("memoized constants are consistent across precisions and threads") {
  const mpfr_prec_t lo = digits_to_bits(40), hi = digits_to_bits(120);
  CHECK(digits_agreement(const_pi(lo), const_pi(hi)) >= 40);
  CHECK(digits_agreement(const_log(2, lo), log(Real(2L, hi))) >= 40);
  // Gamma(1/2) = sqrt(pi)
  CHECK(digits_agreement(const_gamma(1, 2, hi), sqrt(const_pi(hi))) >= 115);
  // zeta(4) = pi^4 / 90
  CHECK(digits_agreement(const_zeta(4, hi), pow(const_pi(hi), 4L) / 90L) >= 115);

  std::vector<std::string> out(8);
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i) {
    pool.emplace_back([i, &out] { out[i] = const_gamma(1, 4, digits_to_bits(60 + 10 * (i % 3))).to_string(50); });
  }
  for (auto& t : pool) t.join();
  for (const auto& s : out) CHECK(s == out[0]);
}

TEST_CASE("complex arithmetic") {
  const mpfr_prec_t b = digits_to_bits(30);
  const Complex z(Real(3L, b), Real(4L, b));
  CHECK(abs(z) == 5L);
  const Complex w = pow(z, 2);
  CHECK(w.re == -7L);
  CHECK(w.im == 24L);
  const Complex q = w / z;
  CHECK(digits_agreement(q.re, Real(3L, b)) >= 28);
  // hypot without overflow
  const Complex big(Real("1e300000", b), Real("1e300000", b));
  CHECK(digits_agreement(abs(big) / Real("1e300000", b), sqrt(Real(2L, b))) >= 28);
}

TEST_CASE("self-consistency under precision escalation") {
  const PrecisionContext c(40);
  const PrecisionContext up = c.with_target(60);
  const Real a = exp(const_pi(c.bits()) * sqrt(Real(163L, c.bits())));
  const Real b = exp(const_pi(up.bits()) * sqrt(Real(163L, up.bits())));
  CHECK(digits_agreement(a, b) >= 40);
}
