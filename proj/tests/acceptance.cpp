// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line each. Exit status is the number of failures.

#include "elv/closed_form.hpp"
#include "elv/errors.hpp"
#include "elv/lattice_sums.hpp"
#include "elv/lseries.hpp"
#include "elv/qseries.hpp"
#include "elv/quadrature.hpp"
#include "elv/registry.hpp"
#include "elv/relations.hpp"
#include "elv/special_functions.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace elv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Accumulates sub-checks; the criterion passes when all of them do.
struct Outcome {
  bool ok = true;
  std::ostringstream log;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    log << (cond ? "" : "!") << what << "; ";
  }
  void digits(const std::string& what, int got, int need) {
    require(got >= need, what + " " + std::to_string(got) + "/" + std::to_string(need) + "d");
  }
  void time(const std::string& what, double secs, double limit) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s %.1fs/%.0fs", what.c_str(), secs, limit);
    require(secs <= limit, buf);
  }
};

Real cf(const std::string& text, const PrecisionContext& ctx) { return evaluate(parse_closed_form_sum(text), ctx); }

int failures = 0;

void criterion(int n, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.log << "exception: " << e.what();
  }
  if (!o.ok) ++failures;
  std::printf("%s  %2d  %-44s %6.1fs  %s\n", o.ok ? "PASS" : "FAIL", n, title, seconds_since(t0), o.log.str().c_str());
  std::fflush(stdout);
}

QSeries S(const char* eta, long N) { return eta_quotient_expand(parse_eta_quotient(eta), N); }

bool same_result(const VerificationReport& a, const VerificationReport& b) {
  return a.id == b.id && a.status == b.status && a.digits_achieved == b.digits_achieved &&
         a.first_mismatch == b.first_mismatch && a.lhs_value == b.lhs_value && a.rhs_value == b.rhs_value &&
         a.target == b.target && a.detail == b.detail;
}

}  // namespace

int main() {
  criterion(1, "cubic K' moment, Gamma(1/4)^8 form", [](Outcome& o) {
    const PrecisionContext ctx(60);
    const auto t0 = Clock::now();
    const Real v = moment("k3", ctx);
    const double secs = seconds_since(t0);
    o.digits("vs Gamma^8/(128 pi^2)", digits_agreement(v, cf("Gamma(1/4)^8/(128*pi^2)", ctx)), 40);
    o.time("single-threaded", secs, 120);
  });

  criterion(2, "moment ratios 10/3 and 5", [](Outcome& o) {
    const PrecisionContext ctx(40);
    const Real k3 = moment("k3", ctx);
    const auto a = to_rational(k3 / moment("K3", ctx), 100, 40);
    const auto b = to_rational(k3 / moment("kK3", ctx), 100, 40);
    o.require(a && *a == mpq_class(10, 3), "K'^3/K^3 = " + (a ? a->get_str() : std::string("none")));
    o.require(b && *b == mpq_class(5), "K'^3/kK'^3 = " + (b ? b->get_str() : std::string("none")));
  });

  criterion(3, "30 L(g,4), K' moment, closed form", [](Outcome& o) {
    const PrecisionContext ctx(40);
    const Real l = 30L * lvalue(named_form("g"), 4, ctx);
    const Real m = moment("k3", ctx);
    const Real c = 30L * cf("Gamma(1/4)^8/(3840*pi^2)", ctx);
    o.digits("L vs moment", digits_agreement(l, m), 35);
    o.digits("L vs closed", digits_agreement(l, c), 35);
    o.digits("moment vs closed", digits_agreement(m, c), 35);
  });

  criterion(4, "192 L(h,4), h moment, closed form", [](Outcome& o) {
    const PrecisionContext ctx(40);
    const Real l = 192L * lvalue(named_form("h"), 4, ctx);
    const Real m = moment("h4", ctx);
    const Real c = cf("3*Gamma(1/4)^8/(32*sqrt(2)*pi^2)", ctx);
    o.digits("L vs moment", digits_agreement(l, m), 35);
    o.digits("L vs closed", digits_agreement(l, c), 35);
    o.digits("moment vs closed", digits_agreement(m, c), 35);
  });

  criterion(5, "exact q-series suite", [](Outcome& o) {
    const auto t0 = Clock::now();
    const long N = 2000;
    o.require(series_equal(S("eta(4)^14/eta(8)^4", N),
                           mpz_class(4) * S("eta(2)^4*eta(4)^2*eta(8)^4", N) + S("eta(1)^4*eta(2)^2*eta(4)^4", N), N)
                  .equal,
              "eta^14 decomposition");
    o.require(series_equal(S("eta(1)^3", N), jacobi_eta3_series(N), N).equal, "eta^3 Jacobi");
    const QSeries g = eta_combination_expand(named_form("g").source, N);
    o.require(series_equal(theta_expand(parse_binary_form("P=(x-i*y)^4; Q=1,0,1; scale=1/4"), N), g, N).equal,
              "g Glaisher");
    ProductSpec hp;
    hp.lead = 1;
    hp.factors = {{4, true, 14}, {8, false, -4}};
    const QSeries hs =
        theta_expand(parse_binary_form("P=(y-i*x)^4; Q=1,0,1; x=2m; y=2n+1; sign=(-1)^m; scale=1/2"), N);
    o.require(series_equal(product_expand(hp, N), hs, N).equal, "h product = h series");
    o.require(series_equal(S("eta(8)^38/(eta(4)^14*eta(16)^14)", N), hs, N).equal, "h eta quotient = h series");
    o.log << "N=" << N << "; ";
    for (const char* name : {"g", "h", "f2"}) {
      const QSeries s = eta_combination_expand(named_form(name).source, 500);
      o.require(multiplicativity_check(s, 500).multiplicative, std::string("multiplicative ") + name + " to 500");
    }
    o.time("total", seconds_since(t0), 300);
  });

  criterion(6, "weight 3 table and the theta route", [](Outcome& o) {
    const PrecisionContext ctx(40);
    struct Row {
      const char* form;
      const char* value;
    };
    for (const Row& r : {Row{"eta6-4", "Gamma(1/4)^4/(64*pi)"}, Row{"eta3-2-6", "Gamma(1/3)^6/(2^(17/3)*pi^2)"},
                         Row{"eta3-1-7", "Gamma(1/7)^2*Gamma(2/7)^2*Gamma(4/7)^2/(224*pi^2)"},
                         Row{"eta3-15-plus", "Gamma(1/15)*Gamma(2/15)*Gamma(4/15)*Gamma(8/15)/(30*sqrt(48)*pi)"},
                         Row{"eta3-15-minus", "Gamma(1/15)*Gamma(2/15)*Gamma(4/15)*Gamma(8/15)/(30*sqrt(60)*pi)"},
                         Row{"martin-8a", "Gamma(1/8)^2*Gamma(3/8)^2/(64*sqrt(2)*pi)"},
                         Row{"martin-8b", "Gamma(1/4)^4/(32*sqrt(2)*pi)"},
                         Row{"martin-8c", "Gamma(1/8)^2*Gamma(3/8)^2/(192*pi)"}}) {
      o.digits(r.form, digits_agreement(lvalue(named_form(r.form), 2, ctx), cf(r.value, ctx)), 30);
    }
    auto mellin = [&](const char* f) { return lvalue(named_form(f), 2, ctx); };
    o.digits("(4,4)", digits_agreement(lvalue_weight3(4, 4, ctx), mellin("eta6-4")), 30);
    o.digits("(2,6)", digits_agreement(lvalue_weight3(2, 6, ctx), mellin("eta3-2-6")), 30);
    o.digits("(1,7)", digits_agreement(lvalue_weight3(1, 7, ctx), mellin("eta3-1-7")), 30);
    o.digits("(3,5)", digits_agreement(lvalue_weight3(3, 5, ctx), mellin("eta3-3-5")), 30);
    o.digits("(1,15)", digits_agreement(lvalue_weight3(1, 15, ctx), mellin("eta3-1-15")), 30);
    const Real a = lvalue_weight3(3, 5, ctx), b = lvalue_weight3(1, 15, ctx);
    o.digits("(3,5)+(1,15)", digits_agreement(a + b, mellin("eta3-15-plus")), 30);
    o.digits("(3,5)-(1,15)", digits_agreement(a - b, mellin("eta3-15-minus")), 30);
  });

  criterion(7, "lattice sums", [](Outcome& o) {
    const PrecisionContext ctx(30);
    struct Sum {
      const char* label;
      const char* spec;
      const char* value;
    };
    const Sum sums[] = {
        {"h alternating", "P=(y-i*x)^4; Q=1,0,1; x=2m; y=2n+1; sign=(-1)^m; power=4; origin=include",
         "Gamma(1/4)^8/(1024*sqrt(2)*pi^2)"},
        {"m^2-2n^2", "P=x^2-2*y^2; Q=1,0,2; sign=(-1)^(m+1); power=2", "Gamma(1/8)^2*Gamma(3/8)^2/(48*pi)"},
        {"shifted 3m+1,3n+1", "P=18*x*y; Q=1,0,2; x=3m+1; y=3n+1; sign=(-1)^m; power=2",
         "Gamma(1/8)^2*Gamma(3/8)^2/(48*pi)"},
        {"m^2-4n^2", "P=x^2-4*y^2; Q=1,0,4; sign=(-1)^(m+1); power=2", "Gamma(1/4)^4/(32*pi)"},
        {"m^2-3n^2", "P=x^2-3*y^2; Q=1,0,3; sign=(-1)^(m+n+1); power=2", "Gamma(1/3)^6/(2^(14/3)*pi^2)"},
        {"m^2+mn+2n^2", "P=2*y^2-x^2; Q=1,1,2; sign=(-1)^m; power=2",
         "Gamma(1/7)^2*Gamma(2/7)^2*Gamma(4/7)^2/(56*pi^2)"},
        {"m^2n^2 (-1)^(m+n)", "P=x^2*y^2; Q=1,0,1; sign=(-1)^(m+n); power=3",
         "Gamma(1/4)^8/(2^9*3*pi^3) - pi*log(2)/8"},
        {"m^4 (-1)^(m+n)", "P=x^4; Q=1,0,1; sign=(-1)^(m+n); power=3", "-Gamma(1/4)^8/(2^9*3*pi^3) - 3*pi*log(2)/8"},
        {"m^2n^2 (-1)^m", "P=x^2*y^2; Q=1,0,1; sign=(-1)^m; power=3", "-Gamma(1/4)^8/(2^10*3*pi^3) - pi*log(2)/16"},
    };
    long max_rows = 0;
    for (const Sum& s : sums) {
      const LatticeValue v = accelerated_sum(parse_lattice_spec(s.spec), ctx, 12);
      max_rows = std::max(max_rows, v.rows);
      o.digits(s.label, digits_agreement(v.value, cf(s.value, ctx)), 10);
      o.require(v.rows <= 10000000, std::string(s.label) + " rows " + std::to_string(v.rows));
    }
    o.log << "max rows " << max_rows << "; ";
    const SidePair g = g2_combination_check(PrecisionContext(30));
    o.digits("g2 combination", g.digits, 25);
    o.digits("g2 side vs closed", digits_agreement(g.rhs, cf("Gamma(1/4)^8/(1024*sqrt(2)*pi^2)", PrecisionContext(30))), 25);
  });

  criterion(8, "weight 9 and weight 13", [](Outcome& o) {
    const PrecisionContext ctx(40);
    const mpfr_prec_t b = ctx.bits();
    for (const char* q : {"0.1", "0.3", "0.5"}) {
      const Weight9Check c = weight9_ktheta_check(Real(std::string_view(q), b), 800, ctx);
      o.digits(std::string("theta vs modulus q=") + q, c.digits, 35);
    }
    const Weight9Check c = weight9_ktheta_check(exp(-const_pi(b)), 800, ctx);
    o.digits("theta vs modulus q=e^-pi", c.digits, 35);
    o.digits("K'^7 moment", digits_agreement(moment("w9", ctx), cf("3*Gamma(1/4)^16/(2^12*5*pi^4)", ctx)), 30);
    o.digits("K'^11 moment", digits_agreement(moment("w13", ctx), cf("189*Gamma(1/4)^24/(2^15*65*pi^6)", ctx)), 30);
  });

  criterion(9, "PSLQ rediscovery of Gamma products", [](Outcome& o) {
    const PrecisionContext ctx(60);
    using Source = std::function<Real(const PrecisionContext&)>;
    struct Case {
      const char* label;
      Source value;
      const char* basis;
      const char* expected;
    };
    const Case cases[] = {
        {"k3", [](const PrecisionContext& c) { return moment("k3", c); }, "quarter", "Gamma(1/4)^8/(128*pi^2)"},
        {"h4", [](const PrecisionContext& c) { return moment("h4", c); }, "quarter", "3*Gamma(1/4)^8/(32*sqrt(2)*pi^2)"},
        {"eta6-4", [](const PrecisionContext& c) { return lvalue(named_form("eta6-4"), 2, c); }, "quarter",
         "Gamma(1/4)^4/(64*pi)"},
        {"eta3-2-6", [](const PrecisionContext& c) { return lvalue(named_form("eta3-2-6"), 2, c); }, "third",
         "Gamma(1/3)^6/(2^(17/3)*pi^2)"},
        {"eta3-1-7", [](const PrecisionContext& c) { return lvalue(named_form("eta3-1-7"), 2, c); }, "seventh",
         "Gamma(1/7)^2*Gamma(2/7)^2*Gamma(4/7)^2/(224*pi^2)"},
        {"w9", [](const PrecisionContext& c) { return moment("w9", c); }, "quarter", "3*Gamma(1/4)^16/(2^12*5*pi^4)"},
    };
    for (const Case& c : cases) {
      const auto t0 = Clock::now();
      const auto d = discover_gamma_form(c.value, named_basis(c.basis), ctx);
      const double secs = seconds_since(t0);
      o.require(d && d->form == parse_closed_form(c.expected),
                std::string(c.label) + " -> " + (d ? format_closed_form(d->form) : std::string("none")));
      if (d) o.digits(std::string(c.label) + " at +20", d->verified_digits, ctx.target_digits() + 15);
      o.time(c.label, secs, 60);
    }
    // controls: values with no relation over the offered basis
    const auto x = discover_gamma_form([](const PrecisionContext& c) { return lvalue_weight3(1, 7, c); },
                                       named_basis("quarter"), ctx);
    const auto y = discover_gamma_form([](const PrecisionContext& c) { return const_pi(c.bits()) + 1L; },
                                       named_basis("third"), ctx);
    const auto z = discover_gamma_form([](const PrecisionContext& c) { return moment("k3", c); }, named_basis("seventh"), ctx);
    o.require(!x && !y && !z, "no false positives on 3 controls");
  });

  criterion(10, "hypergeometric values and chains", [](Outcome& o) {
    const PrecisionContext ctx(30);
    const mpfr_prec_t b = ctx.bits();
    const Real pi = const_pi(b);
    const auto f43 = pFq({mpq_class(3, 4), 1, 1, mpq_class(5, 4)}, {mpq_class(3, 2), mpq_class(3, 2), mpq_class(3, 2)},
                         Real(1L, b), ctx, true);
    o.digits("4F3 vs Gamma^2(1/8)Gamma^2(3/8)/(48 pi)",
             digits_agreement(f43.value, cf("Gamma(1/8)^2*Gamma(3/8)^2/(48*pi)", ctx)), 12);
    o.digits("I1 via 4F3", digits_agreement(moment("i1", ctx), (cf("Gamma(1/8)^2*Gamma(3/8)^2/(16*pi)", ctx) - f43.value) / 2L), 12);

    const mpq_class h(1, 2);
    const Real a = pFq({h, h, h, h}, {1, 1, 1}, Real(1L, b), ctx, true).value;
    const Real integral = moment("K2w", ctx) / 8L;
    o.digits("4F3 = (32/pi^3) (1/8) int K^2/k'", digits_agreement(a, 32L * integral / pow(pi, 3L)), 12);
    o.digits("L(f1,3) = (1/8) int K^2/k'", digits_agreement(lvalue(named_form("f1"), 3, ctx), integral), 12);

    const Real s = pFq({mpq_class(5, 4), h, h, h, h, h, h}, {mpq_class(1, 4), 1, 1, 1, 1, 1}, Real(1L, b), ctx, true).value;
    const Real k2 = moment("K2sq", ctx) / 4L;
    o.digits("(1/4) int K^2 = (pi^4/128) 7F6", digits_agreement(k2, pow(pi, 4L) * s / 128L), 12);
    o.digits("(1/8) int K K'/k' = (1/4) int K^2", digits_agreement(moment("KKp", ctx) / 8L, k2), 12);
    o.digits("L(f2,3) = (1/4) int K^2", digits_agreement(lvalue(named_form("f2"), 3, ctx), k2), 12);
  });

  criterion(11, "property suites and full registry runs", [](Outcome& o) {
    const PrecisionContext ctx(30);
    const mpfr_prec_t b = ctx.bits();
    const Real pi = const_pi(b);
    int worst = 1000;
    for (const char* ks : {"0.001", "0.3", "0.70710678", "0.9", "0.999"}) {
      const Real k(std::string_view(ks), b);
      const Real kp = sqrt((1L - k) * (1L + k));
      const Real K = ellK(k, ctx), Kp = ellKprime(k, ctx), E = ellE_pair(k, kp, ctx), Ep = ellE_pair(kp, k, ctx);
      worst = std::min(worst, digits_agreement(E * Kp + Ep * K - K * Kp, pi / 2L));
    }
    o.digits("Legendre relation", worst, 30);

    worst = 1000;
    for (const char* as : {"0.01", "0.5", "0.99"}) {
      const Real alpha(std::string_view(as), b);
      const ModulusPair m = modulus_from_nome(nome(alpha, ctx), ctx);
      worst = std::min(worst, digits_agreement(m.k * m.k, alpha));
    }
    o.digits("nome round trip", worst, 30);

    worst = 1000;
    for (const char* ys : {"0.3", "0.7", "1.5"}) {
      const Real y(std::string_view(ys), b);
      worst = std::min(worst, digits_agreement(eta(y, ctx), eta_product(y, ctx)));
      worst = std::min(worst, digits_agreement(eta(1L / y, ctx), sqrt(y) * eta(y, ctx)));
    }
    o.digits("eta inversion", worst, 30);

    worst = 1000;
    for (const auto& name : named_form_names()) {
      const ModularFormSpec& f = named_form(name);
      for (int s = 1; s < f.weight; ++s) {
        worst = std::min(worst, digits_agreement(lvalue(f, s, ctx, {1.0}), lvalue(f, s, ctx, {0.7})));
      }
    }
    o.digits("split-point independence", worst, 30);

    bool decay = true;
    for (const auto& id : moment_ids()) {
      const QuadResult r = tanh_sinh(moment_integrand(id), ctx);
      decay = decay && r.error_estimate < pow(Real(10L, b), -30L);
      const Real floor = pow(Real(10L, b), -static_cast<long>(ctx.working_digits()) + 2);
      for (std::size_t l = 0; l + 2 < r.level_values.size(); ++l) {
        const Real e0 = abs(r.level_values[l] - r.value) / abs(r.value);
        const Real e1 = abs(r.level_values[l + 1] - r.value) / abs(r.value);
        if (e0 < floor) break;
        decay = decay && e1 * 10L <= e0;
      }
    }
    o.require(decay, "tanh-sinh geometric decay on " + std::to_string(moment_ids().size()) + " integrands");

    const Registry& reg = default_registry();
    RunOptions one, four;
    four.threads = 4;
    auto t0 = Clock::now();
    const RunSummary a = run_all(reg, "*", one);
    o.time("run_all 1 thread", seconds_since(t0), 1800);
    t0 = Clock::now();
    const RunSummary c = run_all(reg, "*", four);
    o.time("run_all 4 threads", seconds_since(t0), 600);
    bool same = a.reports.size() == c.reports.size();
    for (std::size_t i = 0; same && i < a.reports.size(); ++i) same = same_result(a.reports[i], c.reports[i]);
    o.require(same, "identical reports");
    o.require(a.failed == 0 && a.shortfall == 0,
              "registry " + std::to_string(a.passed) + "/" + std::to_string(a.reports.size()) + " pass");
  });

  return failures;
}
