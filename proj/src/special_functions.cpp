#include "elv/special_functions.hpp"

#include "elv/acceleration.hpp"
#include "elv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elv {

namespace {

Real epsilon(mpfr_prec_t bits) { return ldexp(Real(1L, bits), -static_cast<long>(bits)); }

Real half_pi(mpfr_prec_t bits) { return ldexp(const_pi(bits), -1); }

bool is_nonpositive_integer(const Real& x) {
  return x <= 0L && floor(x) == x;
}

}  // namespace

Real gamma(const Real& x, const PrecisionContext& ctx) {
  if (is_nonpositive_integer(x)) throw domain_error("gamma: pole at nonpositive integer");
  Real r(ctx.bits());
  mpfr_gamma(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

Real agm(const Real& a0, const Real& b0, const PrecisionContext& ctx) {
  if (!(a0 > 0L) || !(b0 > 0L)) throw domain_error("agm: arguments must be positive");
  const mpfr_prec_t bits = ctx.bits();
  Real a = a0.with_bits(bits);
  Real b = b0.with_bits(bits);
  const Real tol = ldexp(Real(1L, bits), -static_cast<long>(bits) / 2 + 4);
  for (int iter = 0; iter < 200; ++iter) {
    if (abs(a - b) <= tol * a) break;
    Real next = ldexp(a + b, -1);
    b = sqrt(a * b);
    a = std::move(next);
  }
  // Relative gap is below sqrt(eps) here, so one more mean lands within a few ulps.
  return ldexp(a + b, -1);
}

Real ellK_from_complement(const Real& kprime, const PrecisionContext& ctx) {
  if (!(kprime > 0L)) throw domain_error("ellK: diverges at k = 1");
  const mpfr_prec_t bits = ctx.bits();
  return half_pi(bits) / agm(Real(1L, bits), kprime, ctx);
}

Real ellK(const Real& k, const PrecisionContext& ctx) {
  if (k < 0L || !(k < 1L)) {
    if (k == 1L) throw domain_error("ellK: diverges at k = 1");
    throw domain_error("ellK: modulus must satisfy 0 <= k < 1");
  }
  const mpfr_prec_t bits = ctx.bits();
  Real kk = k.with_bits(bits);
  Real kprime = sqrt((1L - kk) * (1L + kk));
  return ellK_from_complement(kprime, ctx);
}

Real ellKprime(const Real& k, const PrecisionContext& ctx) {
  if (!(k > 0L) || k > 1L) {
    if (k == 0L) throw domain_error("ellKprime: diverges at k = 0");
    throw domain_error("ellKprime: modulus must satisfy 0 < k <= 1");
  }
  const mpfr_prec_t bits = ctx.bits();
  return half_pi(bits) / agm(Real(1L, bits), k, ctx);
}

Real ellE_pair(const Real& k, const Real& kprime, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  if (kprime.is_zero()) return Real(1L, bits);
  Real a(1L, bits);
  Real b = kprime.with_bits(bits);
  Real c = k.with_bits(bits);
  Real sum = ldexp(c * c, -1);
  const Real tol = epsilon(bits);
  for (long n = 1; n < 200; ++n) {
    Real next_a = ldexp(a + b, -1);
    Real next_b = sqrt(a * b);
    c = ldexp(a - b, -1);
    a = std::move(next_a);
    b = std::move(next_b);
    Real contribution = ldexp(c * c, n - 1);
    sum += contribution;
    if (contribution <= tol * sum && abs(a - b) <= tol * a) break;
  }
  Real K = half_pi(bits) / a;
  return K * (1L - sum);
}

Real ellE(const Real& k, const PrecisionContext& ctx) {
  if (k < 0L || k > 1L) throw domain_error("ellE: modulus must satisfy 0 <= k <= 1");
  const mpfr_prec_t bits = ctx.bits();
  if (k == 1L) return Real(1L, bits);
  Real kk = k.with_bits(bits);
  return ellE_pair(kk, sqrt((1L - kk) * (1L + kk)), ctx);
}

Real nome(const Real& alpha, const PrecisionContext& ctx) {
  if (!(alpha > 0L) || !(alpha < 1L)) throw domain_error("nome: alpha must lie in (0, 1)");
  const mpfr_prec_t bits = ctx.bits();
  Real a = alpha.with_bits(bits);
  Real one(1L, bits);
  // K'/K with k = sqrt(alpha): agm(1, k') / agm(1, k).
  Real ratio = agm(one, sqrt(1L - a), ctx) / agm(one, sqrt(a), ctx);
  return exp(-(const_pi(bits) * ratio));
}

namespace {

// Number of terms N with q^{N^2} below 10^-(working+5).
long theta_terms(const Real& q, const PrecisionContext& ctx) {
  double lq = -log(q).to_double();
  double need = (ctx.working_digits() + 5) * std::log(10.0);
  return static_cast<long>(std::ceil(std::sqrt(need / lq))) + 1;
}

void check_nome(const Real& q) {
  if (q < 0L) throw domain_error("theta: nome must be nonnegative");
  if (!(q < 1L)) throw convergence_error("theta: series diverges for q >= 1");
}

}  // namespace

Real theta3(const Real& q0, const PrecisionContext& ctx) {
  check_nome(q0);
  const mpfr_prec_t bits = ctx.bits();
  if (q0.is_zero()) return Real(1L, bits);
  Real q = q0.with_bits(bits);
  const long n_max = theta_terms(q, ctx);
  Real sum(bits);
  Real power = q;      // q^{n^2}
  Real step = q * q * q;  // q^{2n+1} for n = 1
  for (long n = 1; n <= n_max; ++n) {
    sum += power;
    power *= step;
    step *= q * q;
  }
  return 1L + ldexp(sum, 1);
}

Real theta4(const Real& q0, const PrecisionContext& ctx) {
  check_nome(q0);
  const mpfr_prec_t bits = ctx.bits();
  if (q0.is_zero()) return Real(1L, bits);
  Real q = q0.with_bits(bits);
  const long n_max = theta_terms(q, ctx);
  Real sum(bits);
  Real power = q;
  Real step = q * q * q;
  for (long n = 1; n <= n_max; ++n) {
    if (n & 1) sum -= power;
    else sum += power;
    power *= step;
    step *= q * q;
  }
  return 1L + ldexp(sum, 1);
}

Real theta2(const Real& q0, const PrecisionContext& ctx) {
  check_nome(q0);
  const mpfr_prec_t bits = ctx.bits();
  if (q0.is_zero()) return Real(bits);
  Real q = q0.with_bits(bits);
  const long n_max = theta_terms(q, ctx);
  // 2 q^{1/4} sum_{n>=0} q^{n(n+1)}
  Real sum(1L, bits);
  Real power(1L, bits);
  Real step = q * q;  // q^{2(n+1)} takes n(n+1) to (n+1)(n+2)
  for (long n = 1; n <= n_max; ++n) {
    power *= step;
    sum += power;
    step *= q * q;
  }
  return ldexp(sqrt(sqrt(q)) * sum, 1);
}

ModulusPair modulus_from_nome(const Real& q, const PrecisionContext& ctx) {
  Real t2 = theta2(q, ctx);
  Real t3 = theta3(q, ctx);
  Real t4 = theta4(q, ctx);
  Real t3sq = t3 * t3;
  return {t2 * t2 / t3sq, t4 * t4 / t3sq};
}

namespace {

// prod_{n>=1} (1 - q^n) until q^n drops below the working epsilon.
Real euler_product(const Real& q, mpfr_prec_t bits) {
  Real prod(1L, bits);
  if (q.is_zero()) return prod;
  const Real tol = epsilon(bits);
  Real power = q;
  for (int n = 1; n < 1000000; ++n) {
    if (power < tol) break;
    prod *= 1L - power;
    power *= q;
  }
  return prod;
}

}  // namespace

EtaParts eta_parts(const Real& y0, const PrecisionContext& ctx) {
  if (!(y0 > 0L)) throw domain_error("eta: y must be positive");
  const mpfr_prec_t bits = ctx.bits();
  Real y = y0.with_bits(bits);
  Real two_pi = ldexp(const_pi(bits), 1);
  if (y >= 1L) {
    Real q = exp(-(two_pi * y));
    return {-(two_pi * y) / 24L, euler_product(q, bits)};
  }
  Real inv = 1L / y;
  Real q = exp(-(two_pi * inv));
  Real scale = -(two_pi * inv) / 24L - ldexp(log(y), -1);
  return {scale, euler_product(q, bits)};
}

Real eta(const Real& y, const PrecisionContext& ctx) {
  EtaParts parts = eta_parts(y, ctx);
  return exp(parts.log_scale) * parts.product;
}

Real eta_product(const Real& y0, const PrecisionContext& ctx) {
  if (!(y0 > 0L)) throw domain_error("eta: y must be positive");
  const mpfr_prec_t bits = ctx.bits();
  Real y = y0.with_bits(bits);
  Real two_pi = ldexp(const_pi(bits), 1);
  Real q = exp(-(two_pi * y));
  return exp(-(two_pi * y) / 24L) * euler_product(q, bits);
}

// ---------------------------------------------------------------- pFq

namespace {

struct TermRatio {
  const std::vector<mpq_class>& upper;
  const std::vector<mpq_class>& lower;

  // t_{n+1}/t_n without the z factor.
  mpq_class at(long n) const {
    mpq_class r(1);
    for (const auto& a : upper) r *= a + n;
    for (const auto& b : lower) r /= b + n;
    r /= n + 1;
    return r;
  }
};

std::optional<long> terminating_index(const std::vector<mpq_class>& upper) {
  std::optional<long> stop;
  for (const auto& a : upper) {
    if (a.get_den() == 1 && a <= 0) {
      long n = -a.get_num().get_si();
      if (!stop || n < *stop) stop = n;
    }
  }
  return stop;
}

}  // namespace

HypergeometricResult pFq(const std::vector<mpq_class>& upper, const std::vector<mpq_class>& lower,
                         const Real& z0, const PrecisionContext& ctx, bool accelerate) {
  for (const auto& b : lower) {
    if (b.get_den() == 1 && b <= 0) throw domain_error("pFq: lower parameter is a nonpositive integer");
  }
  const TermRatio ratio{upper, lower};
  const auto stop = terminating_index(upper);
  const mpfr_prec_t bits = ctx.bits();
  Real z = z0.with_bits(bits);

  if (stop) {
    Real term(1L, bits), sum(1L, bits);
    for (long n = 0; n < *stop; ++n) {
      term *= Real(ratio.at(n), bits) * z;
      sum += term;
    }
    return {sum, ctx.working_digits()};
  }

  const std::size_t p = upper.size(), q = lower.size();
  if (p > q + 1 && !z.is_zero()) throw domain_error("pFq: series diverges (p > q + 1)");
  const bool unit = (p == q + 1) && abs(z) == 1L;
  if (p == q + 1 && abs(z) > 1L) throw domain_error("pFq: series diverges for |z| > 1");

  if (unit) {
    mpq_class excess = 0;
    for (const auto& b : lower) excess += b;
    for (const auto& a : upper) excess -= a;
    if (z > 0L && excess <= 0) throw domain_error("pFq: series diverges at z = 1");
    if (z < 0L && excess <= -1) throw domain_error("pFq: series diverges at z = -1");
    if (!accelerate) throw domain_error("pFq: polynomially convergent series requires acceleration");

    // Levin-u is unstable on logarithmic sequences; carry roughly twice the
    // working precision through the transformation.
    const mpfr_prec_t inner = 2 * bits + 64;
    const int w = ctx.working_digits();
    const int k_max = std::max(2 * w, 60);
    std::vector<Real> sums, terms;
    sums.reserve(k_max + 1);
    terms.reserve(k_max + 1);
    Real term(1L, inner), sum(1L, inner);
    Real zi = z.with_bits(inner);
    sums.push_back(sum);
    terms.push_back(term);
    for (long n = 0; n < k_max; ++n) {
      term *= Real(ratio.at(n), inner) * zi;
      sum += term;
      sums.push_back(sum);
      terms.push_back(term);
    }
    int order = std::max(8, w / 2);
    Real prev = levin_u_order(sums, terms, order - 4);
    Real best = prev;
    int best_digits = 0;
    for (; order <= k_max; order += 4) {
      Real cur = levin_u_order(sums, terms, order);
      int agree = digits_agreement(cur, prev);
      if (agree >= best_digits) {
        best_digits = agree;
        best = cur;
      }
      if (agree >= ctx.target_digits() + 3) break;
      prev = std::move(cur);
    }
    best_digits = std::min(best_digits, ctx.working_digits());
    if (best_digits < ctx.target_digits()) {
      throw shortfall_error("pFq: Levin acceleration stalled below target", best.to_string(best_digits + 2),
                            best_digits);
    }
    return {best.with_bits(bits), best_digits};
  }

  // Direct summation: geometric convergence (|z| < 1) or entire (p <= q).
  // With a = num/den, (a + n) = (den n + num) / den; the denominators fold into
  // one constant and each step costs a few word-sized multiplies and divides.
  std::vector<std::pair<long, long>> up, lo;  // (den, num)
  Real step_constant = z;
  for (const auto& a : upper) {
    up.emplace_back(a.get_den().get_si(), a.get_num().get_si());
    step_constant /= Real(a.get_den(), bits);
  }
  for (const auto& b : lower) {
    lo.emplace_back(b.get_den().get_si(), b.get_num().get_si());
    step_constant *= Real(b.get_den(), bits);
  }
  auto ratio_magnitude = [&](long n) {
    double r = std::fabs(z.to_double()) / static_cast<double>(n + 1);
    for (const auto& a : upper) r *= std::fabs(a.get_d() + static_cast<double>(n));
    for (const auto& b : lower) r /= std::fabs(b.get_d() + static_cast<double>(n));
    return r;
  };
  Real term(1L, bits), sum(1L, bits);
  const Real tol = epsilon(bits);
  const long n_max = 400000000;
  for (long n = 0; n < n_max; ++n) {
    for (const auto& [d, p] : up) mpfr_mul_si(term.raw(), term.get(), d * n + p, MPFR_RNDN);
    for (const auto& [d, p] : lo) mpfr_div_si(term.raw(), term.get(), d * n + p, MPFR_RNDN);
    mpfr_div_ui(term.raw(), term.get(), static_cast<unsigned long>(n + 1), MPFR_RNDN);
    term *= step_constant;
    sum += term;
    // Terms must also be shrinking for the cut to be safe.
    if (abs(term) <= tol * abs(sum) && ratio_magnitude(n + 1) < 1.0) return {sum, ctx.working_digits()};
  }
  throw convergence_error("pFq: direct summation did not converge");
}

Real incomplete_gamma_int(int s, const Real& x0, const PrecisionContext& ctx) {
  if (s < 1) throw domain_error("incomplete_gamma_int: s must be a positive integer");
  if (x0 < 0L) throw domain_error("incomplete_gamma_int: x must be nonnegative");
  const mpfr_prec_t bits = ctx.bits();
  Real x = x0.with_bits(bits);
  Real term(1L, bits), sum(1L, bits);
  for (int j = 1; j < s; ++j) {
    term *= x;
    term /= static_cast<long>(j);
    sum += term;
  }
  Real factorial(1L, bits);
  for (int j = 2; j < s; ++j) factorial *= static_cast<long>(j);
  return factorial * exp(-x) * sum;
}

Real g2(const Real& y, const PrecisionContext& ctx) {
  if (!(y > 0L)) throw domain_error("g2: tau = iy needs y > 0");
  const mpfr_prec_t bits = ctx.bits();
  Real q = exp(-(const_pi(bits) * y.with_bits(bits)));
  Real t2 = theta2(q, ctx);
  Real t3 = theta3(q, ctx);
  Real t3sq = t3 * t3;
  Real k = t2 * t2 / t3sq;
  Real K = half_pi(bits) * t3sq;
  Real k2 = k * k;
  Real K2 = K * K;
  return Real(64L, bits) / 3L * (1L - k2 + k2 * k2) * K2 * K2;
}

SingularValue singular_value(const mpq_class& p, const PrecisionContext& ctx) {
  if (p <= 0) throw domain_error("singular_value: p must be positive");
  const mpfr_prec_t bits = ctx.bits();
  Real q = exp(-(const_pi(bits) * sqrt(Real(p, bits))));
  ModulusPair m = modulus_from_nome(q, ctx);
  return {p, std::move(m.k), std::move(m.kprime)};
}

}  // namespace elv
