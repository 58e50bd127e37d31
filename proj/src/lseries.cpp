#include "elv/lseries.hpp"

#include "elv/errors.hpp"
#include "elv/quadrature.hpp"
#include "elv/special_functions.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace elv {

ModularFormSpec make_form(std::string name, std::string_view eta_text, int level) {
  ModularFormSpec f;
  f.name = std::move(name);
  f.level = level;
  f.source = parse_eta_combination(eta_text);
  mpq_class w = f.source.weight();
  for (const auto& [c, spec] : f.source.terms) {
    if (spec.weight() != w) throw domain_error("form '" + f.name + "': terms of different weight");
  }
  if (w.get_den() != 1 || w <= 0) throw domain_error("form '" + f.name + "': weight must be a positive integer");
  f.weight = static_cast<int>(w.get_num().get_si());
  return f;
}

namespace {

const std::map<std::string, ModularFormSpec, std::less<>>& form_table() {
  static const auto table = [] {
    std::map<std::string, ModularFormSpec, std::less<>> t;
    auto add = [&](const char* name, const char* text, int level = 0) { t.emplace(name, make_form(name, text, level)); };
    add("g", "eta(1)^4*eta(2)^2*eta(4)^4");
    add("h", "eta(8)^38/(eta(4)^14*eta(16)^14)", 64);
    add("f1", "eta(4)^16/(eta(2)^4*eta(8)^4)");
    add("f2", "eta(2)^4*eta(4)^4");
    add("eta6-4", "eta(4)^6");
    add("eta3-2-6", "eta(2)^3*eta(6)^3");
    add("eta3-1-7", "eta(1)^3*eta(7)^3");
    add("eta3-3-5", "eta(3)^3*eta(5)^3");
    add("eta3-1-15", "eta(1)^3*eta(15)^3");
    add("eta3-15-plus", "eta(3)^3*eta(5)^3 + eta(1)^3*eta(15)^3");
    add("eta3-15-minus", "eta(3)^3*eta(5)^3 - eta(1)^3*eta(15)^3");
    add("martin-8a", "eta(4)^5*eta(8)^5/(eta(2)^2*eta(16)^2)");
    add("martin-8b", "eta(8)^18/(eta(4)^6*eta(16)^6)");
    add("martin-8c", "eta(1)^2*eta(2)*eta(4)*eta(8)^2");
    // -f(-q) for martin-8c, written as an eta quotient.
    add("f0", "eta(2)^7*eta(8)^2/(eta(1)^2*eta(4))");
    return t;
  }();
  return table;
}

// q-expansions shared across calls, keyed by (source text, N).
QSeries cached_expansion(const ModularFormSpec& f, long N) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, long>, QSeries> cache;
  const auto key = std::pair{format_eta_combination(f.source), N};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  QSeries s = eta_combination_expand(f.source, N);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(s)).first->second;
}

mpq_class min_lead(const ModularFormSpec& f) {
  mpq_class lead = f.source.terms.front().second.lead();
  for (const auto& [c, spec] : f.source.terms) lead = std::min(lead, spec.lead());
  return lead;
}

}  // namespace

const ModularFormSpec& named_form(std::string_view name) {
  const auto& t = form_table();
  auto it = t.find(name);
  if (it == t.end()) throw domain_error("unknown modular form '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> named_form_names() {
  std::vector<std::string> out;
  for (const auto& [n, _] : form_table()) out.push_back(n);
  return out;
}

Real form_at(const ModularFormSpec& f, const Real& y, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const Real negligible(-(ctx.working_digits() + 40) * std::log(10.0), bits);
  std::map<int, EtaParts> parts;
  for (const auto& [c, spec] : f.source.terms) {
    for (auto [m, e] : spec.factors) {
      if (!parts.count(m)) parts.emplace(m, eta_parts(y * static_cast<long>(m), ctx));
    }
  }
  Real sum(bits);
  for (const auto& [c, spec] : f.source.terms) {
    Real log_scale(bits);
    for (auto [m, e] : spec.factors) log_scale += parts.at(m).log_scale * static_cast<long>(e);
    if (log_scale < negligible) continue;
    Real term = exp(log_scale);
    for (auto [m, e] : spec.factors) term *= pow(parts.at(m).product, static_cast<long>(e));
    sum += Real(c, bits) * term;
  }
  return sum;
}

Real lvalue(const ModularFormSpec& f, int s, const PrecisionContext& ctx, LValueOptions opt) {
  if (s < 1 || s > f.weight - 1) {
    throw domain_error("lvalue: s = " + std::to_string(s) + " is outside the critical strip of '" + f.name + "'");
  }
  const mpq_class lead = min_lead(f);
  if (lead.get_den() != 1 || lead < 1) throw domain_error("lvalue: '" + f.name + "' is not a cusp form in q");
  const mpfr_prec_t bits = ctx.bits();
  const Real pi = const_pi(bits);
  const Real y0(opt.y0, bits);
  const Real gamma_s = const_gamma(s, 1, bits);

  // Tail length from |a_n| <= C n^(w/2), C measured on the expansion itself.
  const double ln10 = std::log(10.0);
  const double two_pi_y0 = 2.0 * M_PI * opt.y0;
  auto tail_bound_log = [&](double C, long n) {
    // log of C n^(w/2) n^-s (2 pi n y0)^(s-1) e^(-2 pi n y0) / Gamma(s), up to constants
    return std::log(C) + (f.weight / 2.0 - 1.0) * std::log(static_cast<double>(n)) + (s - 1) * std::log(two_pi_y0) -
           two_pi_y0 * n + 2.0 * std::log(n + 1.0);
  };
  auto measured_C = [&](const QSeries& a) {
    double C = 1.0;
    for (long n = 1; n <= a.bound(); ++n) {
      double an = std::fabs(mpz_get_d(a.a(n).get_mpz_t()));
      C = std::max(C, an / std::pow(static_cast<double>(n), f.weight / 2.0));
    }
    return C;
  };
  const double threshold = -(ctx.working_digits() + 5) * ln10;
  long N = 64;
  QSeries a = cached_expansion(f, N);
  for (;;) {
    double C = measured_C(a);
    long need = 1;
    while (tail_bound_log(C, need) > threshold) ++need;
    if (need <= N) {
      N = need;
      break;
    }
    N = std::max(need, 2 * N);
    a = cached_expansion(f, N);
  }

  Real tail(bits);
  const Real two_pi_y0_r = ldexp(pi, 1) * y0;
  for (long n = 1; n <= N; ++n) {
    const mpz_class an = a.a(n);
    if (an == 0) continue;
    Real x = two_pi_y0_r * n;
    tail += Real(an, bits) * incomplete_gamma_int(s, x, ctx) / pow(Real(n, bits), static_cast<long>(s));
  }
  tail /= gamma_s;

  Integrand head{"mellin-head:" + f.name,
                 [&](const Real& x, const Real&, const PrecisionContext& c) {
                   Real y = y0 * x;
                   return form_at(f, y, c) * pow(y, static_cast<long>(s - 1));
                 },
                 {0, 0, 0, 0},
                 "f(iy) y^(s-1) on (0, y0)"};
  QuadResult q = tanh_sinh(head, ctx);
  Real head_value = q.value * y0 * pow(ldexp(pi, 1), static_cast<long>(s)) / gamma_s;
  return tail + head_value;
}

Real lvalue_weight3(int r, int s, const PrecisionContext& ctx) {
  if (r < 1 || s < 1) throw domain_error("lvalue_weight3: r and s must be positive");
  if ((r + s) % 8 != 0) throw domain_error("lvalue_weight3: r + s must be divisible by 8");
  const mpfr_prec_t bits = ctx.bits();
  const Real pi = const_pi(bits);
  const Real norm = sqrt(Real(static_cast<long>(r) * s * s * s, bits));

  SingularValue sv = singular_value(mpq_class(r, s), ctx);
  Real K = ellK_from_complement(sv.kprime, ctx);
  Real modulus_route = 8L * sv.k * sv.kprime * K * K / norm;

  Real q = exp(-pi * sqrt(Real(mpq_class(r, s), bits)));
  Real t2 = theta2(q, ctx), t4 = theta4(q, ctx);
  Real theta_route = 2L * pi * pi * t2 * t2 * t4 * t4 / norm;

  const int agree = digits_agreement(modulus_route, theta_route);
  if (agree < ctx.target_digits()) {
    throw convergence_error("lvalue_weight3(" + std::to_string(r) + "," + std::to_string(s) +
                            "): modulus and theta routes agree to only " + std::to_string(agree) + " digits");
  }
  return modulus_route;
}

Real lvalue_weight9_s8(const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real e4 = g2(Real(1L, bits), ctx) / (120L * const_zeta(4, bits));
  return ldexp(const_zeta(8, bits) * e4 * e4, -1);
}

std::optional<CriticalRatio> critical_ratio(const ModularFormSpec& f, int s1, int s2, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real ratio = lvalue(f, s1, ctx) / lvalue(f, s2, ctx) / pow(const_pi(bits), static_cast<long>(s1 - s2));
  auto r = to_rational(ratio, mpz_class(1000000), ctx.target_digits() - 5);
  if (!r) return std::nullopt;
  return CriticalRatio{*r, s1 - s2};
}

Real lvalue_partial_sum(const ModularFormSpec& f, int s, long N, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  QSeries a = cached_expansion(f, N);
  Real sum(bits);
  for (long n = 1; n <= N; ++n) {
    const mpz_class an = a.a(n);
    if (an != 0) sum += Real(an, bits) / pow(Real(n, bits), static_cast<long>(s));
  }
  return sum;
}

}  // namespace elv
