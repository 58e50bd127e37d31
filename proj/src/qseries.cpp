#include "elv/qseries.hpp"

#include "elv/errors.hpp"
#include "elv/special_functions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace elv {

namespace {

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

long floor_to_long(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}

std::size_t length_for(const mpq_class& lead, long N) {
  long idx = floor_to_long(mpq_class(N) - lead);
  return idx < 0 ? 0 : static_cast<std::size_t>(idx) + 1;
}

// A^e for a dense series with A[0] = 1 (J. C. P. Miller's recurrence), exact.
std::vector<mpz_class> power_unit(const std::vector<mpz_class>& A, long e, std::size_t len) {
  std::vector<mpz_class> P(len);
  if (len == 0) return P;
  P[0] = 1;
  std::vector<std::size_t> nz;
  for (std::size_t k = 1; k < A.size() && k < len; ++k) {
    if (A[k] != 0) nz.push_back(k);
  }
  mpz_class acc, t;
  for (std::size_t n = 1; n < len; ++n) {
    acc = 0;
    for (std::size_t k : nz) {
      if (k > n) break;
      t = static_cast<long>((e + 1) * static_cast<long>(k) - static_cast<long>(n));
      t *= A[k];
      acc += t * P[n - k];
    }
    mpz_divexact_ui(P[n].get_mpz_t(), acc.get_mpz_t(), n);
  }
  return P;
}

std::vector<mpz_class> stretch(const std::vector<mpz_class>& a, int m, std::size_t len) {
  std::vector<mpz_class> out(len);
  for (std::size_t i = 0; i < a.size() && i * m < len; ++i) out[i * m] = a[i];
  return out;
}

// Euler's pentagonal series prod (1 - t^n), dense up to len.
std::vector<mpz_class> pentagonal(std::size_t len) {
  std::vector<mpz_class> E(len);
  for (long k = 0;; ++k) {
    bool any = false;
    for (long kk : {k, -k}) {
      if (k == 0 && kk != 0) continue;
      long idx = kk * (3 * kk - 1) / 2;
      if (idx < static_cast<long>(len)) {
        E[idx] = (k % 2 == 0) ? 1 : -1;
        any = true;
      }
    }
    if (!any) break;
  }
  return E;
}

std::vector<mpz_class> mul_dense(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, std::size_t len) {
  std::vector<mpz_class> c(len);
  for (std::size_t i = 0; i < len && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return c;
}

}  // namespace

mpz_class QSeries::at(const mpq_class& exponent) const {
  mpq_class d = exponent - lead;
  if (!is_integer(d) || d < 0) return 0;
  if (d > static_cast<long>(coeffs.size()) - 1) {
    throw domain_error("q-series: coefficient of q^" + exponent.get_str() + " is beyond the truncation order");
  }
  return coeffs[d.get_num().get_ui()];
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  mpq_class shift = a.lead - b.lead;
  if (!is_integer(shift)) throw domain_error("q-series: adding series with incompatible leads");
  QSeries r;
  r.lead = std::min(a.lead, b.lead);
  mpq_class bound = std::min(a.bound(), b.bound());
  long len = floor_to_long(bound - r.lead) + 1;
  r.coeffs.assign(std::max(0L, len), mpz_class(0));
  for (long i = 0; i < len; ++i) {
    mpq_class e = r.lead + i;
    r.coeffs[i] = a.at(e) + b.at(e);
  }
  return r;
}

QSeries operator-(const QSeries& a) {
  QSeries r = a;
  for (auto& c : r.coeffs) c = -c;
  return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const mpz_class& c, const QSeries& a) {
  QSeries r = a;
  for (auto& x : r.coeffs) x *= c;
  return r;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  QSeries r;
  r.lead = a.lead + b.lead;
  r.coeffs = mul_dense(a.coeffs, b.coeffs, std::min(a.order(), b.order()));
  return r;
}

QSeries power(const QSeries& a, long e) {
  if (a.coeffs.empty()) throw domain_error("q-series power: empty series");
  const mpz_class& c0 = a.coeffs[0];
  if (c0 != 1 && c0 != -1) throw domain_error("q-series power: leading coefficient must be +1 or -1");
  std::vector<mpz_class> unit = a.coeffs;
  if (c0 == -1) {
    for (auto& c : unit) c = -c;
  }
  QSeries r;
  r.lead = a.lead * e;
  r.coeffs = power_unit(unit, e, a.order());
  if (c0 == -1 && (e % 2 != 0)) {
    for (auto& c : r.coeffs) c = -c;
  }
  return r;
}

QSeries trimmed(const QSeries& a) {
  QSeries r = a;
  std::size_t z = 0;
  while (z < r.coeffs.size() && r.coeffs[z] == 0) ++z;
  if (z == r.coeffs.size() && z > 0) z = r.coeffs.size() - 1;
  r.coeffs.erase(r.coeffs.begin(), r.coeffs.begin() + static_cast<long>(z));
  r.lead += static_cast<long>(z);
  return r;
}

// ------------------------------------------------------------ eta quotients

mpq_class EtaQuotientSpec::weight() const {
  long s = 0;
  for (auto [m, e] : factors) s += e;
  mpq_class w(s, 2);
  w.canonicalize();
  return w;
}

mpq_class EtaQuotientSpec::lead() const {
  long s = 0;
  for (auto [m, e] : factors) s += static_cast<long>(m) * e;
  mpq_class r(s, 24);
  r.canonicalize();
  return r;
}

mpq_class EtaCombination::weight() const {
  if (terms.empty()) throw domain_error("empty eta combination");
  return terms.front().second.weight();
}

namespace {

class EtaParser {
 public:
  explicit EtaParser(std::string_view s) : s_(s) {}

  EtaCombination combination() {
    EtaCombination c;
    bool first = true;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      int sign = 1;
      if (eat('+')) sign = 1;
      else if (eat('-')) sign = -1;
      else if (!first) fail("expected '+' or '-'");
      first = false;
      skip();
      mpz_class coef = 1;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        coef = integer();
        if (!eat('*')) fail("expected '*' after coefficient");
      }
      std::map<int, int> acc;
      product(acc, 1);
      c.terms.emplace_back(sign * coef, finish(acc));
    }
    if (c.terms.empty()) fail("empty expression");
    return c;
  }

  EtaQuotientSpec single() {
    std::map<int, int> acc;
    product(acc, 1);
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return finish(acc);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error("eta quotient '" + std::string(s_) + "': " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  static EtaQuotientSpec finish(const std::map<int, int>& acc) {
    EtaQuotientSpec spec;
    for (auto [m, e] : acc) {
      if (e != 0) spec.factors.emplace_back(m, e);
    }
    return spec;
  }

  // product := factor (('*'|'/') factor)*
  void product(std::map<int, int>& acc, int sign) {
    factor(acc, sign);
    for (;;) {
      if (eat('*')) factor(acc, sign);
      else if (eat('/')) factor(acc, -sign);
      else return;
    }
  }

  // factor := 'eta(' int ')' ['^' ['-'] int] | '(' product ')'
  void factor(std::map<int, int>& acc, int sign) {
    skip();
    if (eat('(')) {
      product(acc, sign);
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (s_.substr(pos_, 4) != "eta(") fail("expected eta(");
    pos_ += 4;
    long m = integer();
    if (m < 1) fail("eta scale must be positive");
    if (!eat(')')) fail("expected ')'");
    long e = 1;
    if (eat('^')) {
      bool neg = eat('-');
      e = integer();
      if (neg) e = -e;
    }
    acc[static_cast<int>(m)] += static_cast<int>(sign * e);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

EtaQuotientSpec parse_eta_quotient(std::string_view text) { return EtaParser(text).single(); }

EtaCombination parse_eta_combination(std::string_view text) { return EtaParser(text).combination(); }

std::string format_eta_quotient(const EtaQuotientSpec& spec) {
  std::string s;
  for (auto [m, e] : spec.factors) {
    if (!s.empty()) s += "*";
    s += "eta(" + std::to_string(m) + ")";
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

std::string format_eta_combination(const EtaCombination& combo) {
  std::string s;
  for (const auto& [c, spec] : combo.terms) {
    mpz_class a = abs(c);
    if (s.empty()) s += (c < 0 ? "-" : "");
    else s += (c < 0 ? " - " : " + ");
    if (a != 1) s += a.get_str() + "*";
    s += format_eta_quotient(spec);
  }
  return s;
}

QSeries eta_quotient_expand(const EtaQuotientSpec& spec, long N) {
  if (N < 1) throw domain_error("eta_quotient_expand: N must be >= 1");
  QSeries r;
  r.lead = spec.lead();
  const std::size_t len = length_for(r.lead, N);
  std::vector<mpz_class> acc(len);
  if (len > 0) acc[0] = 1;
  for (auto [m, e] : spec.factors) {
    const std::size_t sub = (len == 0) ? 0 : (len - 1) / m + 1;
    std::vector<mpz_class> factor = stretch(power_unit(pentagonal(sub), e, sub), m, len);
    acc = mul_dense(acc, factor, len);
  }
  r.coeffs = std::move(acc);
  return r;
}

QSeries eta_combination_expand(const EtaCombination& combo, long N) {
  if (combo.terms.empty()) throw domain_error("eta_combination_expand: empty combination");
  QSeries sum;
  bool first = true;
  for (const auto& [c, spec] : combo.terms) {
    QSeries term = c * eta_quotient_expand(spec, N);
    sum = first ? term : sum + term;
    first = false;
  }
  return sum;
}

QSeries product_expand(const ProductSpec& spec, long N) {
  QSeries r;
  r.lead = spec.lead;
  const std::size_t len = length_for(r.lead, N);
  std::vector<mpz_class> acc(len);
  if (len > 0) acc[0] = 1;
  for (const auto& f : spec.factors) {
    if (f.m < 1) throw domain_error("product_expand: scale must be positive");
    const std::size_t sub = (len == 0) ? 0 : (len - 1) / f.m + 1;
    std::vector<mpz_class> base(sub);
    if (sub > 0) base[0] = 1;
    for (std::size_t n = 1; n < sub; ++n) {
      // multiply by (1 - eps_n t^n)
      const bool plus = f.alternating && (n % 2 == 1);
      for (std::size_t i = sub - 1; i >= n; --i) {
        if (plus) base[i] += base[i - n];
        else base[i] -= base[i - n];
        if (i == n) break;
      }
    }
    acc = mul_dense(acc, stretch(power_unit(base, f.exponent, sub), f.m, len), len);
  }
  r.coeffs = std::move(acc);
  return r;
}

QSeries theta_expand(const BinaryFormSpec& spec, long N) {
  if (N < 1) throw domain_error("theta_expand: N must be >= 1");
  const double a = spec.qa, b = spec.qb, c = spec.qc;
  const double lambda = ((a + c) - std::sqrt((a - c) * (a - c) + b * b)) / 2.0;
  if (lambda <= 0) throw domain_error("theta_expand: form is not positive definite");
  const double xmax = std::sqrt(N / lambda) + 1.0;
  std::vector<GaussInt> acc(static_cast<std::size_t>(N) + 1, GaussInt{0, 0});

  // Raw index ranges covering |x| <= xmax, |y| <= xmax.
  auto index_range = [&](const AffineIndex& ax) {
    double lo = (-xmax - ax.offset) / ax.scale, hi = (xmax - ax.offset) / ax.scale;
    if (lo > hi) std::swap(lo, hi);
    return std::pair<long, long>{static_cast<long>(std::floor(lo)) - 1, static_cast<long>(std::ceil(hi)) + 1};
  };
  auto [m_lo, m_hi] = index_range(spec.x);
  auto [n_lo, n_hi] = index_range(spec.y);
  for (long m = m_lo; m <= m_hi; ++m) {
    const mpz_class xv = spec.x.at(m);
    for (long n = n_lo; n <= n_hi; ++n) {
      const mpz_class yv = spec.y.at(n);
      if (spec.exclude_origin && xv == 0 && yv == 0) continue;
      mpz_class q = spec.form_at(xv, yv);
      if (q > N) continue;
      GaussInt w = spec.numerator.eval(xv, yv);
      if (spec.sign.at(m, n) < 0) w = {-w.re, -w.im};
      acc[q.get_ui()] += w;
    }
  }
  QSeries r;
  r.lead = 0;
  r.coeffs.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i].im != 0) {
      throw domain_error("theta_expand: imaginary part survives at q^" + std::to_string(i));
    }
    mpq_class v = spec.scale * mpq_class(acc[i].re);
    v.canonicalize();
    if (v.get_den() != 1) {
      throw domain_error("theta_expand: non-integral coefficient at q^" + std::to_string(i));
    }
    r.coeffs[i] = v.get_num();
  }
  return r;
}

QSeries jacobi_eta3_series(long N) {
  QSeries r;
  r.lead = mpq_class(1, 8);
  const std::size_t len = length_for(r.lead, N);
  r.coeffs.assign(len, mpz_class(0));
  for (long n = 1;; n += 2) {
    const long idx = (n * n - 1) / 8;
    if (idx >= static_cast<long>(len)) break;
    r.coeffs[idx] = (n % 4 == 1) ? n : -n;
  }
  return r;
}

SeriesComparison series_equal(const QSeries& a, const QSeries& b, long N) {
  if (!is_integer(a.lead - b.lead)) throw domain_error("series_equal: leads differ by a non-integer");
  if (a.bound() + 1 <= N || b.bound() + 1 <= N) throw domain_error("series_equal: order too small for N");
  SeriesComparison out;
  for (mpq_class e = std::min(a.lead, b.lead); e <= N; e += 1) {
    if (a.at(e) != b.at(e)) {
      out.equal = false;
      out.first_mismatch = e;
      return out;
    }
  }
  return out;
}

MultiplicativityResult multiplicativity_check(const QSeries& a, long N) {
  if (a.lead != 1) throw domain_error("multiplicativity_check: series must start at q^1");
  if (a.a(1) != 1) throw domain_error("multiplicativity_check: a_1 must be 1");
  if (a.bound() < N) throw domain_error("multiplicativity_check: order too small for N");
  MultiplicativityResult out;
  for (long p = 6; p <= N; ++p) {
    for (long m = 2; m * m < p; ++m) {
      if (p % m != 0) continue;
      const long n = p / m;
      if (std::gcd(m, n) != 1) continue;
      if (a.a(p) != a.a(m) * a.a(n)) {
        out.multiplicative = false;
        out.first_violation = std::pair{m, n};
        return out;
      }
    }
  }
  return out;
}

QSeries twist_negate(const QSeries& a) {
  if (!is_integer(a.lead)) throw domain_error("twist_negate: leading exponent must be an integer");
  QSeries r = a;
  const long lead = a.lead.get_num().get_si();
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    if ((lead + static_cast<long>(i)) % 2 == 0) r.coeffs[i] = -r.coeffs[i];
  }
  return r;
}

Real evaluate(const QSeries& a, const Real& q) {
  const mpfr_prec_t bits = q.bits();
  // Horner in q over the integer offsets, then the q^lead prefactor.
  Real acc(bits);
  for (std::size_t i = a.coeffs.size(); i-- > 0;) {
    acc *= q;
    acc += Real(a.coeffs[i], bits);
  }
  if (a.lead != 0) acc *= pow(q, a.lead);
  return acc;
}

BinaryFormSpec weight9_theta_spec() { return parse_binary_form("P=(x-i*y)^8; Q=1,0,1; scale=1/4"); }

Weight9Check weight9_ktheta_check(const Real& q, long N, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real series = evaluate(theta_expand(weight9_theta_spec(), N), q.with_bits(bits));
  Real t2 = theta2(q, ctx), t3 = theta3(q, ctx), t4 = theta4(q, ctx);
  Real k = t2 * t2 / (t3 * t3);
  Real kp = t4 * t4 / (t3 * t3);
  Real pi = const_pi(bits);
  Real K = ldexp(pi, -1) * t3 * t3;
  Real kk = k * kp;
  Real theta_side = 8L * (4L * kk * kk + pow(kk, 4L)) * pow(K, 9L) / pow(pi, 9L);
  Weight9Check out{series, theta_side, digits_agreement(series, theta_side)};
  return out;
}

}  // namespace elv
