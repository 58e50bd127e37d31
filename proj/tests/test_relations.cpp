#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "elv/closed_form.hpp"
#include "elv/lseries.hpp"
#include "elv/quadrature.hpp"
#include "elv/relations.hpp"

using namespace elv;

namespace {

const PrecisionContext ctx60(60);

std::vector<mpz_class> Z(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

using Source = std::function<Real(const PrecisionContext&)>;

Source from_moment(const char* id) {
  return [id](const PrecisionContext& c) { return moment(id, c); };
}
Source from_lvalue(const char* f, int s) {
  return [f, s](const PrecisionContext& c) { return lvalue(named_form(f), s, c); };
}

}  // namespace

TEST_CASE("closed form parsing, canonical form and printing") {
  const ClosedForm a = parse_closed_form("3*Gamma(1/4)^8/(32*sqrt(2)*pi^2)");
  const ClosedForm b = parse_closed_form("3*sqrt(2)*Gamma(1/4)^8/(64*pi^2)");
  CHECK(a == b);
  CHECK(a.rational == mpq_class(3, 64));
  CHECK(a.exponents.at("2") == mpq_class(1, 2));
  CHECK(format_closed_form(a) == "3*sqrt(2)*Gamma(1/4)^8/(64*pi^2)");
  CHECK(parse_closed_form(format_closed_form(a)) == a);

  const ClosedForm t = parse_closed_form("Gamma(1/3)^6/(2^(17/3)*pi^2)");
  CHECK(parse_closed_form(format_closed_form(t)) == t);
  CHECK(parse_closed_form("2^(3/2)") == parse_closed_form("2*sqrt(2)"));
  CHECK(parse_closed_form("sqrt(12)") == parse_closed_form("2*sqrt(3)"));

  const ClosedFormSum s = parse_closed_form_sum("Gamma(1/4)^4/(256*pi) - 3*pi*log(2)/32");
  REQUIRE(s.terms.size() == 2);
  CHECK(format_closed_form_sum(s) == "Gamma(1/4)^4/(256*pi) - 3*log(2)*pi/32");
  CHECK(format_closed_form_sum(parse_closed_form_sum(format_closed_form_sum(s))) == format_closed_form_sum(s));

  CHECK_THROWS_AS(parse_closed_form("Gamma(0)"), parse_error);
  CHECK_THROWS_AS(parse_closed_form("zeta(3)"), parse_error);
  CHECK_THROWS_AS(parse_closed_form("1 + pi"), parse_error);
  CHECK_THROWS_AS(parse_closed_form("pi^"), parse_error);
  CHECK_THROWS_AS(constant_value("e", 100), domain_error);
}

TEST_CASE("closed form evaluation") {
  const PrecisionContext c(40);
  CHECK(evaluate(ClosedForm{}, c) == 1L);
  CHECK(digits_agreement(evaluate(parse_closed_form("Gamma(1/4)^8/(128*pi^2)"), c), moment("k3", c)) >= 40);
  CHECK(digits_agreement(evaluate(parse_closed_form("Gamma(1/15)*Gamma(2/15)*Gamma(4/15)*Gamma(8/15)/(30*sqrt(48)*pi)"), c),
                         lvalue(named_form("eta3-15-plus"), 2, c)) >= 38);
  CHECK(digits_agreement(evaluate(parse_closed_form("Gamma(1/15)*Gamma(2/15)*Gamma(4/15)*Gamma(8/15)/(30*sqrt(60)*pi)"), c),
                         lvalue(named_form("eta3-15-minus"), 2, c)) >= 38);
  CHECK(digits_agreement(evaluate(parse_closed_form("2^(1/2)"), c), sqrt(Real(2L, c.bits()))) >= 40);
}

TEST_CASE("PSLQ basics") {
  const mpfr_prec_t b = ctx60.bits();
  const Real phi = (1L + sqrt(Real(5L, b))) / 2L;
  const auto r = pslq({Real(1L, b), phi, phi * phi}, ctx60, 6);
  REQUIRE(r.has_value());
  CHECK(r->coefficients == Z({1, 1, -1}));

  CHECK_FALSE(pslq({Real(1L, b), const_pi(b)}, ctx60, 8).has_value());
  CHECK_THROWS_AS(pslq({Real(1L, b), const_pi(b)}, PrecisionContext(30), 8), insufficient_precision);

  const Real I = moment("k3", ctx60);
  const auto k = pslq({log(I), const_log(2, b), log(const_pi(b)), const_lngamma(1, 4, b)}, ctx60, 6);
  REQUIRE(k.has_value());
  CHECK(k->coefficients == Z({1, 7, 2, -8}));

  SUBCASE("certified residual holds at +20 digits") {
    const PrecisionContext hi = ctx60.with_target(80);
    const mpfr_prec_t bh = hi.bits();
    const std::vector<Real> v{log(moment("k3", hi)), const_log(2, bh), log(const_pi(bh)), const_lngamma(1, 4, bh)};
    Real sum(bh);
    for (std::size_t i = 0; i < v.size(); ++i) sum += Real(k->coefficients[i], bh) * v[i];
    CHECK(abs(sum) < pow(Real(10L, bh), -55L));
  }
  SUBCASE("deterministic") {
    const auto again = pslq({log(I), const_log(2, b), log(const_pi(b)), const_lngamma(1, 4, b)}, ctx60, 6);
    REQUIRE(again.has_value());
    CHECK(again->coefficients == k->coefficients);
  }
}

TEST_CASE("closed-form rediscovery") {
  struct Case {
    const char* label;
    Source value;
    const char* basis;
    const char* expected;
  };
  const Case cases[] = {
      {"K'^3 moment", from_moment("k3"), "quarter", "Gamma(1/4)^8/(128*pi^2)"},
      {"h4 moment", from_moment("h4"), "quarter", "3*Gamma(1/4)^8/(32*sqrt(2)*pi^2)"},
      {"eta^6(4tau)", from_lvalue("eta6-4", 2), "quarter", "Gamma(1/4)^4/(64*pi)"},
      {"eta^3(2tau)eta^3(6tau)", from_lvalue("eta3-2-6", 2), "third", "Gamma(1/3)^6/(2^(17/3)*pi^2)"},
      {"eta^3(tau)eta^3(7tau)", [](const PrecisionContext& c) { return lvalue_weight3(1, 7, c); }, "seventh",
       "Gamma(1/7)^2*Gamma(2/7)^2*Gamma(4/7)^2/(224*pi^2)"},
      {"weight 9 moment", from_moment("w9"), "quarter", "3*Gamma(1/4)^16/(2^12*5*pi^4)"},
      {"weight 13 moment", from_moment("w13"), "quarter-wide", "189*Gamma(1/4)^24/(2^15*65*pi^6)"},
      {"level 15 sum", from_lvalue("eta3-15-plus", 2), "fifteenth",
       "Gamma(1/15)*Gamma(2/15)*Gamma(4/15)*Gamma(8/15)/(30*sqrt(48)*pi)"},
      {"level 8 form", from_lvalue("martin-8c", 2), "eighth", "Gamma(1/8)^2*Gamma(3/8)^2/(192*pi)"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.label);
    const auto d = discover_gamma_form(c.value, named_basis(c.basis), ctx60);
    REQUIRE(d.has_value());
    CHECK(d->form == parse_closed_form(c.expected));
    CHECK(d->verified_digits >= 75);
    CHECK(digits_agreement(evaluate(d->form, ctx60), c.value(ctx60)) >= ctx60.target_digits() - 5);
  }
}

TEST_CASE("no false positives") {
  // a seventh-level value has no relation over the quarter basis
  const auto d = discover_gamma_form([](const PrecisionContext& c) { return lvalue_weight3(1, 7, c); }, named_basis("quarter"), ctx60);
  CHECK_FALSE(d.has_value());
  // pi + 1 is not a product of basis powers
  const auto e = discover_gamma_form([](const PrecisionContext& c) { return const_pi(c.bits()) + 1L; }, named_basis("third"), ctx60);
  CHECK_FALSE(e.has_value());
}

TEST_CASE("bases") {
  const auto names = named_basis_names();
  CHECK(names.size() == 6);
  for (const auto& n : names) {
    for (const auto& c : named_basis(n).constants) CHECK(is_known_constant(c));
    CHECK(named_basis(n).constants.size() <= 8);
  }
  CHECK_THROWS_AS(named_basis("nosuch"), domain_error);
}
