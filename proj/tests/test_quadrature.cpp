#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "elv/errors.hpp"
#include "elv/quadrature.hpp"
#include "elv/special_functions.hpp"

using namespace elv;

namespace {

const PrecisionContext ctx(40);
const mpfr_prec_t B = ctx.bits();
Real pi() { return const_pi(B); }
Real G(long p, long q) { return const_gamma(p, q, B); }
Real m(const char* id) { return moment(id, ctx); }

}  // namespace

TEST_CASE("tanh-sinh on elementary integrands") {
  const Integrand one{"one", [](const Real& x, const Real&, const PrecisionContext&) { return Real(1L, x.bits()); }, {}, "1"};
  CHECK(digits_agreement(tanh_sinh(one, ctx).value, Real(1L, B)) >= 40);

  // x^-1/2 |log x|: int = 4
  const Integrand sing{"s",
                       [](const Real& x, const Real&, const PrecisionContext&) { return -log(x) / sqrt(x); },
                       {-0.5, 1, 0.0, 0},
                       "x^-1/2 log x"};
  CHECK(digits_agreement(tanh_sinh(sing, ctx).value, Real(4L, B)) >= 38);

  // both endpoint arguments stay accurate: int (1-x)^-3/4 = 4
  const Integrand right{"r",
                        [](const Real&, const Real& omx, const PrecisionContext&) { return pow(omx, mpq_class(-3, 4)); },
                        {0.0, 0, -0.75, 0},
                        "(1-x)^-3/4"};
  CHECK(digits_agreement(tanh_sinh(right, ctx).value, Real(4L, B)) >= 38);
}

TEST_CASE("int_0^1 K'(k) dk = pi^2/4") {
  // termwise: K'(k) integrated against the series of K gives (pi/2) 2F1(1/2,1/2;3/2;1)
  const Real series = pi() / 2L * pFq({mpq_class(1, 2), mpq_class(1, 2)}, {mpq_class(3, 2)}, Real(1L, B),
                                      PrecisionContext(30), true).value;
  CHECK(digits_agreement(m("Kp"), pi() * pi() / 4L) >= 40);
  CHECK(digits_agreement(m("Kp"), series) >= 25);
}

TEST_CASE("the cubic moment of K'") {
  CHECK(digits_agreement(m("k3"), pow(G(1, 4), 8L) / (128L * pi() * pi())) >= 40);
  CHECK(to_rational(m("k3") / m("K3"), 100, 40) == mpq_class(10, 3));
  CHECK(to_rational(m("k3") / m("kK3"), 100, 40) == mpq_class(5));
  CHECK(to_rational(m("k3") / m("K2Kp"), 100, 40) == mpq_class(3));
}

TEST_CASE("h-family moments") {
  const Real closed = 3L * pow(G(1, 4), 8L) / (32L * sqrt(Real(2L, B)) * pi() * pi());
  CHECK(digits_agreement(m("h4"), closed) >= 40);
  CHECK(digits_agreement(m("h4"), m("h4_alt") / (8L * sqrt(Real(2L, B)))) >= 40);
}

TEST_CASE("second-kind moment") {
  const Real closed = pow(pi(), 3L) / 12L + pow(G(1, 4), 8L) / (384L * pi() * pi());
  CHECK(digits_agreement(m("EKp2"), closed) >= 40);
}

TEST_CASE("k -> k' symmetry and rational ratios among L(g,s) integrals") {
  CHECK(digits_agreement(m("g3"), m("g2m")) >= 40);
  CHECK(to_rational(lvalue_ratio_integrals("i2", "i1", ctx), 100, 40) == mpq_class(2));
  // pi^(5-s) L(g,s) are proportional to k3, g3, g2m, g1
  for (const char* id : {"g3", "g2m", "g1"}) {
    CAPTURE(id);
    CHECK(to_rational(lvalue_ratio_integrals("k3", id, ctx), 1000, 40).has_value());
  }
}

TEST_CASE("Tricomi's Fourier series for K") {
  // K(sin t) = sum Gamma(n+1/2)^2 / Gamma(n+1)^2 sin((4n+1)t)
  const PrecisionContext c(20);
  const mpfr_prec_t b = c.bits();
  for (const char* ts : {"0.3", "0.7", "1.2"}) {
    const Real t(std::string_view(ts), b);
    const Real K = ellK(sin(t), c);
    Real coef = const_pi(b);  // Gamma(1/2)^2
    Real sum(b);
    std::vector<Real> err;
    long next = 10;
    for (long n = 0; n <= 10000; ++n) {
      sum += coef * sin(Real(4 * n + 1, b) * t);
      const Real r = Real(mpq_class(2 * n + 1, 2 * n + 2), b);
      coef *= r * r;
      if (n + 1 == next) {
        err.push_back(abs(K - sum));
        next *= 10;
      }
    }
    CAPTURE(ts);
    REQUIRE(err.size() == 4);
    CHECK(err[3] < err[0]);
    CHECK(err[3] < Real("1e-3", b));
  }
}

TEST_CASE("geometric error decay across levels on every catalogued integrand") {
  const PrecisionContext c(30);
  for (const auto& id : moment_ids()) {
    CAPTURE(id);
    const QuadResult r = tanh_sinh(moment_integrand(id), c);
    CHECK(r.error_estimate < pow(Real(10L, c.bits()), -30L));
    const Real floor = pow(Real(10L, c.bits()), -static_cast<long>(c.working_digits()) + 2);
    for (std::size_t l = 0; l + 2 < r.level_values.size(); ++l) {
      const Real e0 = abs(r.level_values[l] - r.value) / abs(r.value);
      const Real e1 = abs(r.level_values[l + 1] - r.value) / abs(r.value);
      if (e0 < floor) break;
      CHECK(e1 * 10L <= e0);
    }
  }
}

TEST_CASE("catalogue errors") {
  CHECK_THROWS_AS(moment("nosuch", ctx), domain_error);
  CHECK(moment_ids().size() >= 26);
}
