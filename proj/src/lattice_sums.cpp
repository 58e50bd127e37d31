#include "elv/lattice_sums.hpp"

#include "elv/acceleration.hpp"
#include "elv/errors.hpp"
#include "elv/quadrature.hpp"
#include "elv/special_functions.hpp"

#include <cmath>
#include <limits>

namespace elv {

LatticeSumSpec parse_lattice_spec(std::string_view text) { return parse_binary_form(text); }

namespace {

using i128 = __int128;

// Real-part monomials of the numerator, for the brute-force paths.
struct Monomial {
  int dx, dy;
  long coef;
};

std::vector<Monomial> real_monomials(const Poly2& p) {
  std::vector<Monomial> out;
  for (const auto& [e, c] : p.terms()) {
    if (c.re == 0) continue;
    if (!c.re.fits_slong_p()) throw domain_error("lattice sum: numerator coefficient too large");
    out.push_back({e.first, e.second, c.re.get_si()});
  }
  return out;
}

i128 ipow(i128 b, int e) {
  i128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void set_i128(Real& out, i128 v, Real& scratch) {
  // scratch carries at least 128 bits, so the assembly is exact.
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpfr_set_ui(scratch.raw(), static_cast<unsigned long>(u >> 64), MPFR_RNDN);
  mpfr_mul_2ui(scratch.raw(), scratch.raw(), 64, MPFR_RNDN);
  mpfr_add_ui(scratch.raw(), scratch.raw(), static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL), MPFR_RNDN);
  if (neg) mpfr_neg(scratch.raw(), scratch.raw(), MPFR_RNDN);
  mpfr_set(out.raw(), scratch.get(), MPFR_RNDN);
}

// Brute-force term evaluator with exact 128-bit numerator and denominator.
class TermEvaluator {
 public:
  TermEvaluator(const LatticeSumSpec& spec, long max_abs_index, const PrecisionContext& ctx)
      : spec_(spec), mons_(real_monomials(spec.numerator)), bits_(ctx.bits()),
        num_(std::max<mpfr_prec_t>(bits_, 130)), den_(std::max<mpfr_prec_t>(bits_, 130)),
        scratch_(std::max<mpfr_prec_t>(bits_, 130)), term_(bits_) {
    const double L = static_cast<double>(std::max(std::labs(spec.x.scale), std::labs(spec.y.scale))) * max_abs_index +
                     std::max(std::labs(spec.x.offset), std::labs(spec.y.offset)) + 1.0;
    double pmax = 0;
    for (const auto& mo : mons_) pmax += std::fabs(static_cast<double>(mo.coef)) * std::pow(L, mo.dx + mo.dy);
    const double qmax = (std::labs(spec.qa) + std::labs(spec.qb) + std::labs(spec.qc)) * L * L;
    const double limit = std::ldexp(1.0, 124);
    if (pmax > limit || std::pow(qmax, spec.power) > limit) {
      throw domain_error("lattice sum: brute-force range too large for exact 128-bit terms");
    }
  }

  // Adds the term at raw (m, n) to acc; returns false for the excluded origin.
  bool add(long m, long n, Real& acc) {
    const i128 x = spec_.x.at(m), y = spec_.y.at(n);
    if (x == 0 && y == 0) {
      if (spec_.exclude_origin) return false;
      throw domain_error("lattice sum: origin is not excluded but Q vanishes there");
    }
    i128 p = 0;
    for (const auto& mo : mons_) p += static_cast<i128>(mo.coef) * ipow(x, mo.dx) * ipow(y, mo.dy);
    if (p == 0) return true;
    const i128 q = spec_.qa * x * x + spec_.qb * x * y + spec_.qc * y * y;
    if (spec_.sign.at(m, n) < 0) p = -p;
    set_i128(num_, p, scratch_);
    set_i128(den_, ipow(q, spec_.power), scratch_);
    mpfr_div(term_.raw(), num_.get(), den_.get(), MPFR_RNDN);
    acc += term_;
    return true;
  }

 private:
  const LatticeSumSpec& spec_;
  std::vector<Monomial> mons_;
  mpfr_prec_t bits_;
  Real num_, den_, scratch_, term_;
};

Real apply_scale(Real v, const mpq_class& scale) {
  if (scale == 1) return v;
  return v * Real(scale, v.bits());
}

// ---- closed-form row sums

using PolyL = std::vector<long>;  // coefficients in c, low to high

PolyL derivative(const PolyL& p) {
  PolyL d(p.size() > 1 ? p.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<long>(i) * p[i];
  return d;
}

PolyL add(const PolyL& a, const PolyL& b) {
  PolyL r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

PolyL times_one_plus_c2(const PolyL& p) {
  PolyL r(p.size() + 2, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] += p[i];
    r[i + 2] += p[i];
  }
  return r;
}

PolyL times_c(const PolyL& p) {
  PolyL r(p.size() + 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i];
  return r;
}

PolyL negate(PolyL p) {
  for (auto& v : p) v = -v;
  return p;
}

// D^k [pi cot(pi w)] = pi^(k+1) P_k(cot),  D^k [pi csc(pi w)] = pi^(k+1) csc Q_k(cot).
struct CotPolys {
  std::vector<PolyL> P, Q;
  explicit CotPolys(int kmax) {
    P.push_back({0, 1});
    Q.push_back({1});
    for (int k = 0; k < kmax; ++k) {
      P.push_back(negate(times_one_plus_c2(derivative(P.back()))));
      Q.push_back(negate(add(times_c(Q.back()), times_one_plus_c2(derivative(Q.back())))));
    }
  }
};

Complex horner_c(const PolyL& p, const Complex& c) {
  const mpfr_prec_t bits = c.bits();
  Complex acc(bits);
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * c;
    acc.re += Real(p[i], bits);
  }
  return acc;
}

Real horner_r(const PolyL& p, const Real& c) {
  Real acc(c.bits());
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * c + Real(p[i], c.bits());
  return acc;
}

// cot(pi w), csc(pi w) for complex w off the real axis, through the small
// exponential in whichever half-plane w lies.
void cot_csc(const Complex& w, Complex& cot, Complex& csc) {
  const mpfr_prec_t bits = w.bits();
  const Real pi = const_pi(bits);
  const Complex one(Real(1L, bits), Real(bits));
  const Complex i_unit(Real(bits), Real(1L, bits));
  if (w.im.sign() >= 0) {
    Complex F = exp(Complex(-pi * w.im, pi * w.re));
    Complex E = F * F;
    Complex denom = one - E;
    cot = -(i_unit * (one + E)) / denom;
    csc = -(i_unit * F * Real(2L, bits)) / denom;
  } else {
    Complex G = exp(Complex(pi * w.im, -pi * w.re));
    Complex E = G * G;
    Complex denom = one - E;
    cot = (i_unit * (one + E)) / denom;
    csc = (i_unit * G * Real(2L, bits)) / denom;
  }
}

Real factorial(int n, mpfr_prec_t bits) {
  Real f(1L, bits);
  for (int i = 2; i <= n; ++i) f *= static_cast<long>(i);
  return f;
}

// sum_n s_n / (n + w)^r for complex w, s_n = (-1)^n when alternating.
Complex shifted_power_sum(int r, const Complex& w, bool alternating, const CotPolys& polys) {
  const mpfr_prec_t bits = w.bits();
  Complex cot(bits), csc(bits);
  cot_csc(w, cot, csc);
  Complex v = alternating ? csc * horner_c(polys.Q[r - 1], cot) : horner_c(polys.P[r - 1], cot);
  Real factor = pow(const_pi(bits), static_cast<long>(r)) / factorial(r - 1, bits);
  if ((r - 1) % 2 == 1) factor = -factor;
  return v * factor;
}

// Same for real non-integer w.
Real shifted_power_sum_real(int r, const Real& w, bool alternating, const CotPolys& polys) {
  const mpfr_prec_t bits = w.bits();
  const Real pi = const_pi(bits);
  Real s = sin(pi * w), c = cos(pi * w);
  Real cot = c / s;
  Real v = alternating ? horner_r(polys.Q[r - 1], cot) / s : horner_r(polys.P[r - 1], cot);
  Real factor = pow(pi, static_cast<long>(r)) / factorial(r - 1, bits);
  if ((r - 1) % 2 == 1) factor = -factor;
  return v * factor;
}

mpz_class binomial(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

std::vector<Real> rect_partial_sums(const LatticeSumSpec& spec, long M, const PrecisionContext& ctx) {
  if (M < 0) throw domain_error("rect_sum: M must be non-negative");
  TermEvaluator ev(spec, M, ctx);
  std::vector<Real> sums;
  sums.reserve(static_cast<std::size_t>(M) + 1);
  Real acc(ctx.bits());
  ev.add(0, 0, acc);
  sums.push_back(apply_scale(acc, spec.scale));
  for (long K = 1; K <= M; ++K) {
    for (long n = -K; n <= K; ++n) {
      ev.add(K, n, acc);
      ev.add(-K, n, acc);
    }
    for (long m = -K + 1; m <= K - 1; ++m) {
      ev.add(m, K, acc);
      ev.add(m, -K, acc);
    }
    sums.push_back(apply_scale(acc, spec.scale));
  }
  return sums;
}

Real rect_sum(const LatticeSumSpec& spec, long M, const PrecisionContext& ctx) {
  return rect_partial_sums(spec, M, ctx).back();
}

Real ellipse_partial_sum(const LatticeSumSpec& spec, long R, const PrecisionContext& ctx) {
  const double a = spec.qa, b = spec.qb, c = spec.qc;
  const double lambda = ((a + c) - std::sqrt((a - c) * (a - c) + b * b)) / 2.0;
  const double rmax = std::sqrt(R / lambda) + 1.0;
  auto range = [&](const AffineIndex& ax) {
    double lo = (-rmax - ax.offset) / ax.scale, hi = (rmax - ax.offset) / ax.scale;
    if (lo > hi) std::swap(lo, hi);
    return std::pair<long, long>{static_cast<long>(std::floor(lo)) - 1, static_cast<long>(std::ceil(hi)) + 1};
  };
  auto [m_lo, m_hi] = range(spec.x);
  auto [n_lo, n_hi] = range(spec.y);
  TermEvaluator ev(spec, std::max({std::labs(m_lo), std::labs(m_hi), std::labs(n_lo), std::labs(n_hi)}), ctx);
  Real acc(ctx.bits());
  for (long m = m_lo; m <= m_hi; ++m) {
    const long x = spec.x.at(m);
    for (long n = n_lo; n <= n_hi; ++n) {
      const long y = spec.y.at(n);
      if (spec.qa * x * x + spec.qb * x * y + spec.qc * y * y > R) continue;
      ev.add(m, n, acc);
    }
  }
  return apply_scale(acc, spec.scale);
}

Real row_sum(const LatticeSumSpec& spec, long m, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const int p = spec.power;
  const Poly2 re = spec.numerator.real_part();
  if (re.degree_in_y() >= 2 * p) throw domain_error("row_sum: numerator degree in y too high; rows diverge");
  const CotPolys polys(2 * p);
  const bool alt_n = spec.sign.use_n;
  const long gamma = spec.y.scale, delta = spec.y.offset;
  const mpz_class x = spec.x.at(m);
  const auto coeffs = re.real_coeffs_in_y(x);
  Real row(bits);

  if (x == 0) {
    // Q = c y^2: sum over y = gamma n + delta of s_n y^(j - 2p), y = 0 excluded.
    for (const auto& [j, pj] : coeffs) {
      const int e = 2 * p - j;
      Real part(bits);
      if (delta % gamma == 0) {
        if (!spec.exclude_origin) throw domain_error("row_sum: origin is not excluded but Q vanishes there");
        const long n0 = -delta / gamma;
        if (e % 2 == 0) {
          Real z = const_zeta(static_cast<unsigned long>(e), bits);
          if (alt_n) z = -(z * (1L - ldexp(Real(1L, bits), 1 - e)));  // -eta(e)
          part = 2L * z;
          if (alt_n && (n0 % 2 != 0)) part = -part;
        }
        // odd e: the symmetric sum vanishes
      } else {
        Real w = Real(delta, bits) / Real(gamma, bits);
        part = shifted_power_sum_real(e, w, alt_n, polys);
      }
      part /= pow(Real(gamma, bits), static_cast<long>(e));
      row += Real(pj, bits) * part;
    }
    row /= pow(Real(spec.qc, bits), static_cast<long>(p));
  } else {
    const long a = spec.qa, b = spec.qb, c = spec.qc;
    const Real disc = sqrt(Real(4 * a * c - b * b, bits));
    const Real xr(x, bits);
    // Q(x, y) = c (y - rho)(y - conj rho)
    const Complex rho(xr * (-b) / (2L * c), xr * disc / (2L * c));
    const Complex D(Real(bits), ldexp(rho.im, 1));
    const Complex invD = Complex(Real(1L, bits), Real(bits)) / D;
    // Taylor coefficients of P(rho + t)
    const int deg = coeffs.empty() ? 0 : coeffs.rbegin()->first;
    std::vector<Complex> Pt(static_cast<std::size_t>(p), Complex(bits));
    for (int jt = 0; jt < p && jt <= deg; ++jt) {
      Complex acc(bits);
      for (const auto& [k, pk] : coeffs) {
        if (k < jt) continue;
        Complex term = pow(rho, static_cast<long>(k - jt)) * Real(mpz_class(pk * binomial(k, jt)), bits);
        acc += term;
      }
      Pt[jt] = acc;
    }
    // H(t) = P(rho+t) / (c^p (D + t)^p); A_r = [t^(p-r)] H
    Complex base = pow(invD, static_cast<long>(p)) / pow(Real(c, bits), static_cast<long>(p));
    const Complex w = (Complex(Real(delta, bits), Real(bits)) - rho) / Real(gamma, bits);
    for (int r = 1; r <= p; ++r) {
      const int j = p - r;
      Complex H(bits);
      for (int i = 0; i <= j; ++i) {
        const int l = j - i;
        Complex t = Pt[i] * pow(invD, static_cast<long>(l)) * Real(binomial(p + l - 1, l), bits);
        if (l % 2 == 1) t = -t;
        H += t;
      }
      Complex A = H * base;
      Complex S = shifted_power_sum(r, w, alt_n, polys);
      Complex contrib = A * S / pow(Real(gamma, bits), static_cast<long>(r));
      row += ldexp(contrib.re, 1);
    }
  }
  if (spec.sign.use_m && (m % 2 != 0)) row = -row;
  if (spec.sign.negate) row = -row;
  return apply_scale(row, spec.scale);
}

namespace {

bool absolutely_convergent(const LatticeSumSpec& spec) {
  return spec.numerator.real_part().total_degree() < 2 * spec.power - 2;
}

LatticeValue iterated_sum(const LatticeSumSpec& spec, const PrecisionContext& ctx, int target_digits) {
  const int digits = std::max(ctx.working_digits(), 2 * target_digits + 30);
  const PrecisionContext inner = ctx.with_target(digits).with_guard(std::max(ctx.guard_digits(), 10));
  const mpfr_prec_t bits = inner.bits();
  const long kmax = 2L * target_digits + 24;
  const Real tiny = pow(Real(10L, bits), static_cast<long>(-(target_digits + 8)));

  std::vector<Real> sums, terms;
  Real S(bits);
  long rows = 0;
  for (long K = 0; K <= kmax; ++K) {
    Real t = (K == 0) ? row_sum(spec, 0, inner) : row_sum(spec, K, inner) + row_sum(spec, -K, inner);
    rows += (K == 0) ? 1 : 2;
    S += t;
    sums.push_back(S);
    terms.push_back(t);
    if (K >= 3) {
      const Real scale = max(abs(S), Real(1e-30, bits));
      bool small = true;
      for (long j = K - 2; j <= K; ++j) small = small && (abs(terms[j]) <= tiny * scale);
      if (small) {
        return {S.with_bits(ctx.bits()), target_digits + 8, rows, "direct"};
      }
    }
  }
  // Levin u on S_1..S_kmax; S_0 is a constant offset.
  std::vector<Real> s(sums.begin() + 1, sums.end()), a(terms.begin() + 1, terms.end());
  for (const auto& v : a) {
    if (v.is_zero()) {
      throw shortfall_error("lattice sum: row sequence has zero terms and did not converge directly",
                            S.to_string(target_digits), 0);
    }
  }
  AcceleratedValue full = levin_u(s, a);
  const std::size_t cut = s.size() - 4;
  AcceleratedValue shorter = levin_u(std::span<const Real>(s.data(), cut), std::span<const Real>(a.data(), cut));
  const int digits_est = std::min(full.achieved_digits, digits_agreement(full.value, shorter.value));
  return {full.value.with_bits(ctx.bits()), digits_est, rows, "levin-u"};
}

LatticeValue require(LatticeValue v, int target_digits, const char* what) {
  if (v.achieved_digits < target_digits) {
    throw shortfall_error(std::string(what) + ": reached " + std::to_string(v.achieved_digits) + " of " +
                              std::to_string(target_digits) + " digits",
                          v.value.to_string(std::max(v.achieved_digits, 1) + 5), v.achieved_digits);
  }
  return v;
}

}  // namespace

LatticeValue accelerated_sum(const LatticeSumSpec& spec, const PrecisionContext& ctx, int target_digits) {
  if (spec.sign.trivial() && !absolutely_convergent(spec)) {
    throw domain_error("accelerated_sum: conditionally convergent spec without a sign character; use ellipse_sum");
  }
  return require(iterated_sum(spec, ctx, target_digits), target_digits, "accelerated_sum");
}

Real ellipse_correction(const LatticeSumSpec& spec, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const Poly2 re = spec.numerator.real_part();
  const int excess = re.total_degree() - (2 * spec.power - 2);
  if (re.is_zero() || excess < 0) return Real(bits);
  for (const auto& [e, c] : re.terms()) {
    if (e.first + e.second != 2 * spec.power - 2) {
      throw domain_error("ellipse_correction: numerator must be homogeneous of degree 2*power-2");
    }
  }
  const long a = spec.qa, b = spec.qb, c = spec.qc;
  const Real pi = const_pi(bits);
  const Real disc = sqrt(Real(4 * a * c - b * b, bits));
  const Real sa = sqrt(Real(a, bits));
  // Unit ellipse Q = 1: u_x = cos(t)/sqrt(a) - b sin(t)/(sqrt(a) sqrt(disc)) = R cos(t + phi),
  // u_y = 2 sqrt(a) sin(t)/sqrt(disc); Jacobian 2/sqrt(disc).
  const Real cx = 1L / sa, sx = Real(b, bits) / (sa * disc);
  const Real R = hypot(cx, sx);
  const Real cphi = cx / R, sphi = sx / R;
  std::vector<std::pair<std::pair<int, int>, Real>> mons;
  for (const auto& [e, co] : re.terms()) mons.push_back({e, Real(co.re, bits)});

  Real total(bits);
  for (int piece = 0; piece < 4; ++piece) {
    Integrand f{"ellipse-correction", [&, piece](const Real& x, const Real& omx, const PrecisionContext& c2) {
                  const Real half_pi = ldexp(const_pi(c2.bits()), -1);
                  Real s1 = sin(half_pi * x), s2 = sin(half_pi * omx);
                  Real cpsi(c2.bits()), spsi(c2.bits());
                  switch (piece) {
                    case 0: cpsi = s2; spsi = s1; break;
                    case 1: cpsi = -s1; spsi = s2; break;
                    case 2: cpsi = -s2; spsi = -s1; break;
                    default: cpsi = s1; spsi = -s2; break;
                  }
                  // t = psi - phi
                  Real st = spsi * cphi - cpsi * sphi;
                  Real ux = R * cpsi;
                  Real uy = 2L * sa * st / disc;
                  Real F(c2.bits());
                  for (const auto& [e, co] : mons) F += co * pow(ux, static_cast<long>(e.first)) * pow(uy, static_cast<long>(e.second));
                  return F * -log(abs(ux));
                },
                {0, 1, 0, 1}, "F on the unit ellipse times -log|x|"};
    total += tanh_sinh(f, ctx).value;
  }
  total *= ldexp(pi, -1);  // d psi = (pi/2) dx
  total *= 2L;
  total /= disc;
  total /= Real(std::labs(spec.x.scale * spec.y.scale), bits);
  return apply_scale(total, spec.scale) * static_cast<long>(spec.sign.negate ? -1 : 1);
}

LatticeValue ellipse_sum(const LatticeSumSpec& spec, const PrecisionContext& ctx, int target_digits) {
  if (!spec.sign.trivial()) {
    throw domain_error("ellipse_sum: only defined here for specs without a sign character");
  }
  LatticeValue it = iterated_sum(spec, ctx, target_digits);
  const PrecisionContext inner = ctx.with_target(std::max(ctx.target_digits(), target_digits + 10));
  it.value = it.value - ellipse_correction(spec, inner).with_bits(ctx.bits());
  it.method += "+ellipse-correction";
  return require(it, target_digits, "ellipse_sum");
}

SidePair g2_combination_check(const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  LatticeSumSpec spec = parse_lattice_spec("P=(y-i*x)^4; Q=1,0,1; x=2m; y=2n+1; sign=(-1)^m; power=4; origin=include");
  Real lhs = accelerated_sum(spec, ctx, ctx.target_digits()).value;
  Real rhs = (g2(Real(1L, bits), ctx) - 18L * g2(Real(2L, bits), ctx) + 32L * g2(Real(4L, bits), ctx)) / 960L;
  return {lhs, rhs, digits_agreement(lhs, rhs)};
}

SidePair g2_alternating_check(long y, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  LatticeSumSpec spec = parse_lattice_spec("P=(y-i*x)^4; Q=1,0,1; sign=(-1)^m; power=4");
  spec.x.scale = y;
  Real lhs = accelerated_sum(spec, ctx, ctx.target_digits()).value;
  Real rhs = (2L * g2(Real(2 * y, bits), ctx) - g2(Real(y, bits), ctx)) / 60L;
  return {lhs, rhs, digits_agreement(lhs, rhs)};
}

std::array<SidePair, 3> log2_family_check(const PrecisionContext& ctx, int target_digits) {
  const mpfr_prec_t bits = ctx.bits();
  const Real pi = const_pi(bits);
  const Real gamma_term = pow(const_gamma(1, 4, bits), 8L) / (1536L * pow(pi, 3L));  // Gamma^8/(2^9 3 pi^3)
  const Real pl2 = pi * const_log(2, bits);
  const char* specs[3] = {"P=x^2*y^2; Q=1,0,1; sign=(-1)^(m+n); power=3",
                          "P=x^4; Q=1,0,1; sign=(-1)^(m+n); power=3",
                          "P=x^2*y^2; Q=1,0,1; sign=(-1)^m; power=3"};
  const Real closed[3] = {gamma_term - pl2 / 8L, -gamma_term - 3L * pl2 / 8L, -(gamma_term / 2L) - pl2 / 16L};
  std::array<SidePair, 3> out;
  for (int i = 0; i < 3; ++i) {
    Real v = accelerated_sum(parse_lattice_spec(specs[i]), ctx, target_digits).value;
    out[i] = {v, closed[i], digits_agreement(v, closed[i])};
  }
  return out;
}

}  // namespace elv
