#include "elv/closed_form.hpp"

#include "elv/errors.hpp"

#include <cctype>
#include <numeric>

namespace elv {

namespace {

bool is_prime_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

mpq_class floor_q(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return mpq_class(f);
}

mpq_class pow_q(const mpq_class& b, long e) {
  mpq_class r(1);
  mpq_class base = e < 0 ? mpq_class(1) / b : b;
  for (long i = 0; i < std::labs(e); ++i) r *= base;
  return r;
}

// Trial division; the integers met in closed forms are small.
std::map<long, long> factor(mpz_class n) {
  std::map<long, long> out;
  for (long p = 2; p <= 1000000 && n > 1; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n != 1) throw domain_error("closed form: integer has a large prime factor");
  return out;
}

}  // namespace

void ClosedForm::canonicalize() {
  for (auto it = exponents.begin(); it != exponents.end();) {
    it->second.canonicalize();
    if (is_prime_name(it->first)) {
      const mpq_class f = floor_q(it->second);
      if (f != 0) {
        rational *= pow_q(mpq_class(std::stol(it->first)), f.get_num().get_si());
        it->second -= f;
      }
    }
    it = (it->second == 0) ? exponents.erase(it) : std::next(it);
  }
  rational.canonicalize();
}

ClosedForm& ClosedForm::operator*=(const ClosedForm& rhs) {
  rational *= rhs.rational;
  for (const auto& [k, e] : rhs.exponents) exponents[k] += e;
  canonicalize();
  return *this;
}

ClosedForm ClosedForm::inverse() const { return power(-1); }

ClosedForm ClosedForm::power(const mpq_class& e) const {
  ClosedForm out;
  if (e.get_den() == 1) {
    out.rational = pow_q(rational, e.get_num().get_si());
  } else {
    if (rational <= 0) throw domain_error("closed form: fractional power of a non-positive rational");
    for (auto [p, k] : factor(rational.get_num())) out.exponents[std::to_string(p)] += e * k;
    for (auto [p, k] : factor(rational.get_den())) out.exponents[std::to_string(p)] -= e * k;
  }
  for (const auto& [k, x] : exponents) out.exponents[k] += x * e;
  out.canonicalize();
  return out;
}

// ---- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ClosedFormSum sum() {
    ClosedFormSum out;
    skip();
    bool negative = false;
    if (peek() == '+' || peek() == '-') negative = get() == '-';
    for (;;) {
      ClosedForm t = product();
      if (negative) t.rational = -t.rational;
      out.terms.push_back(std::move(t));
      skip();
      if (peek() != '+' && peek() != '-') break;
      negative = get() == '-';
    }
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return out;
  }

 private:
  ClosedForm product() {
    ClosedForm acc = factor_pow();
    for (;;) {
      skip();
      if (peek() == '*') {
        get();
        acc *= factor_pow();
      } else if (peek() == '/') {
        get();
        acc *= factor_pow().inverse();
      } else {
        return acc;
      }
    }
  }

  ClosedForm factor_pow() {
    ClosedForm base = primary();
    skip();
    if (peek() != '^') return base;
    get();
    return base.power(exponent());
  }

  mpq_class exponent() {
    skip();
    if (peek() == '(') {
      get();
      mpq_class e = signed_rational();
      expect(')');
      return e;
    }
    bool neg = false;
    if (peek() == '-') {
      get();
      neg = true;
    }
    mpq_class e(integer());
    return neg ? mpq_class(-e) : e;
  }

  mpq_class signed_rational() {
    skip();
    bool neg = false;
    if (peek() == '-') {
      get();
      neg = true;
    }
    mpq_class q(integer());
    skip();
    if (peek() == '/') {
      get();
      mpz_class d = integer();
      if (d == 0) fail("zero denominator");
      q /= d;
    }
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
  }

  ClosedForm primary() {
    skip();
    ClosedForm f;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      f.rational = integer();
      return f;
    }
    if (peek() == '(') {
      get();
      f = product();
      expect(')');
      return f;
    }
    std::string word;
    while (std::isalpha(static_cast<unsigned char>(peek()))) word += get();
    if (word == "pi") {
      f.exponents["pi"] = 1;
    } else if (word == "sqrt") {
      expect('(');
      mpz_class n = integer();
      expect(')');
      if (n <= 0) fail("sqrt of a non-positive integer");
      ClosedForm r;
      r.rational = n;
      return r.power(mpq_class(1, 2));
    } else if (word == "Gamma") {
      expect('(');
      mpq_class a = signed_rational();
      expect(')');
      if (a <= 0) fail("Gamma at a non-positive argument");
      f.exponents["Gamma(" + a.get_str() + ")"] = 1;
    } else if (word == "log") {
      expect('(');
      mpz_class n = integer();
      expect(')');
      if (n < 2) fail("log of an integer below 2");
      f.exponents["log(" + n.get_str() + ")"] = 1;
    } else {
      fail(word.empty() ? "expected a factor" : "unknown constant '" + word + "'");
    }
    f.canonicalize();
    return f;
  }

  mpz_class integer() {
    skip();
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
    if (digits.empty()) fail("expected an integer");
    return mpz_class(digits);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error("closed form '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string power_text(const std::string& name, const mpq_class& e) {
  if (e == 1) return name;
  if (e.get_den() == 1) return name + "^" + e.get_str();
  return name + "^(" + e.get_str() + ")";
}

}  // namespace

ClosedForm parse_closed_form(std::string_view text) {
  ClosedFormSum s = Parser(text).sum();
  if (s.terms.size() != 1) throw parse_error("closed form '" + std::string(text) + "': expected a single product");
  return s.terms.front();
}

ClosedFormSum parse_closed_form_sum(std::string_view text) { return Parser(text).sum(); }

std::string format_closed_form(const ClosedForm& cf) {
  std::vector<std::string> num, den;
  const mpz_class rn = abs(cf.rational.get_num());
  if (rn != 1) num.push_back(rn.get_str());
  if (cf.rational.get_den() != 1) den.push_back(cf.rational.get_den().get_str());
  mpz_class surd = 1;
  for (const auto& [k, e] : cf.exponents) {
    if (is_prime_name(k) && e == mpq_class(1, 2)) surd *= mpz_class(k);
  }
  if (surd != 1) num.push_back("sqrt(" + surd.get_str() + ")");
  for (const auto& [k, e] : cf.exponents) {
    if (is_prime_name(k) && e == mpq_class(1, 2)) continue;
    if (e > 0) num.push_back(power_text(k, e));
    else den.push_back(power_text(k, -e));
  }
  std::string out = cf.rational < 0 ? "-" : "";
  if (num.empty()) {
    out += "1";
  } else {
    for (std::size_t i = 0; i < num.size(); ++i) out += (i ? "*" : "") + num[i];
  }
  if (den.size() == 1) {
    out += "/" + den.front();
  } else if (den.size() > 1) {
    out += "/(";
    for (std::size_t i = 0; i < den.size(); ++i) out += (i ? "*" : "") + den[i];
    out += ")";
  }
  return out;
}

std::string format_closed_form_sum(const ClosedFormSum& s) {
  std::string out;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    ClosedForm t = s.terms[i];
    if (i == 0) {
      out += format_closed_form(t);
      continue;
    }
    const bool neg = t.rational < 0;
    if (neg) t.rational = -t.rational;
    out += (neg ? " - " : " + ") + format_closed_form(t);
  }
  return out;
}

bool is_known_constant(std::string_view name) {
  if (name == "pi" || is_prime_name(name)) return true;
  auto inner = [&](std::string_view prefix) {
    return name.size() > prefix.size() + 1 && name.substr(0, prefix.size()) == prefix && name.back() == ')';
  };
  return inner("Gamma(") || inner("log(");
}

Real constant_value(std::string_view name, mpfr_prec_t bits) {
  if (name == "pi") return const_pi(bits);
  if (is_prime_name(name)) return Real(mpz_class(std::string(name)), bits);
  if (name.substr(0, 6) == "Gamma(" && name.back() == ')') {
    mpq_class a(std::string(name.substr(6, name.size() - 7)));
    a.canonicalize();
    return const_gamma(a.get_num().get_si(), a.get_den().get_si(), bits);
  }
  if (name.substr(0, 4) == "log(" && name.back() == ')') {
    return const_log(std::stoul(std::string(name.substr(4, name.size() - 5))), bits);
  }
  throw domain_error("unknown constant '" + std::string(name) + "'");
}

Real evaluate(const ClosedForm& cf, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real v(cf.rational, bits);
  for (const auto& [k, e] : cf.exponents) {
    Real c = constant_value(k, bits);
    v *= (e.get_den() == 1) ? pow(c, e.get_num().get_si()) : pow(c, e);
  }
  return v;
}

Real evaluate(const ClosedFormSum& s, const PrecisionContext& ctx) {
  Real v(ctx.bits());
  for (const auto& t : s.terms) v += evaluate(t, ctx);
  return v;
}

}  // namespace elv
