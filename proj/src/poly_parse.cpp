#include "elv/poly.hpp"

#include "elv/binary_form.hpp"
#include "elv/errors.hpp"

#include <cctype>
#include <sstream>

namespace elv {

Poly2 Poly2::constant(GaussInt c) {
  Poly2 p;
  p.add_term({0, 0}, c);
  return p;
}

Poly2 Poly2::x() {
  Poly2 p;
  p.add_term({1, 0}, {1, 0});
  return p;
}

Poly2 Poly2::y() {
  Poly2 p;
  p.add_term({0, 1}, {1, 0});
  return p;
}

void Poly2::add_term(Exponents e, const GaussInt& c) {
  auto& slot = terms_[e];
  slot += c;
  if (slot.is_zero()) terms_.erase(e);
}

bool Poly2::is_real() const {
  for (const auto& [e, c] : terms_) {
    if (c.im != 0) return false;
  }
  return true;
}

int Poly2::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

int Poly2::degree_in_y() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

GaussInt Poly2::eval(const mpz_class& x, const mpz_class& y) const {
  GaussInt acc{0, 0};
  mpz_class xp, yp;
  for (const auto& [e, c] : terms_) {
    mpz_pow_ui(xp.get_mpz_t(), x.get_mpz_t(), e.first);
    mpz_pow_ui(yp.get_mpz_t(), y.get_mpz_t(), e.second);
    mpz_class m = xp * yp;
    acc.re += c.re * m;
    acc.im += c.im * m;
  }
  return acc;
}

Poly2 Poly2::real_part() const {
  Poly2 p;
  for (const auto& [e, c] : terms_) {
    if (c.re != 0) p.add_term(e, {c.re, 0});
  }
  return p;
}

std::map<int, mpz_class> Poly2::real_coeffs_in_y(const mpz_class& x) const {
  std::map<int, mpz_class> out;
  mpz_class xp;
  for (const auto& [e, c] : terms_) {
    if (c.re == 0) continue;
    mpz_pow_ui(xp.get_mpz_t(), x.get_mpz_t(), e.first);
    out[e.second] += c.re * xp;
  }
  for (auto it = out.begin(); it != out.end();) {
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  }
  return out;
}

Poly2& Poly2::operator+=(const Poly2& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) { return *this += -o; }

Poly2 Poly2::operator-() const {
  Poly2 p;
  for (const auto& [e, c] : terms_) p.terms_[e] = {-c.re, -c.im};
  return p;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  Poly2 p;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      p.add_term({ea.first + eb.first, ea.second + eb.second}, ca * cb);
    }
  }
  return p;
}

Poly2 Poly2::pow(int e) const {
  if (e < 0) throw domain_error("Poly2::pow: negative exponent");
  Poly2 result = constant({1, 0});
  Poly2 base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::string Poly2::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string coeff;
    if (c.im == 0) {
      coeff = c.re.get_str();
    } else if (c.re == 0) {
      coeff = c.im.get_str() + "*i";
    } else {
      coeff = "(" + c.re.get_str() + (c.im > 0 ? "+" : "") + c.im.get_str() + "*i)";
    }
    if (!first) os << (coeff[0] == '-' ? "" : "+");
    os << coeff;
    if (e.first) os << "*x" << (e.first > 1 ? "^" + std::to_string(e.first) : "");
    if (e.second) os << "*y" << (e.second > 1 ? "^" + std::to_string(e.second) : "");
    first = false;
  }
  return os.str();
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Poly2 parse() {
    Poly2 p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error("polynomial '" + std::string(s_) + "': " + msg + " at offset " + std::to_string(pos_));
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

  Poly2 expr() {
    Poly2 p;
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    p = term();
    if (neg) p = -p;
    for (;;) {
      if (eat('+')) p += term();
      else if (eat('-')) p -= term();
      else return p;
    }
  }

  Poly2 term() {
    Poly2 p = factor();
    for (;;) {
      skip();
      if (eat('*')) {
        p = p * factor();
      } else if (pos_ < s_.size() && (s_[pos_] == '(' || s_[pos_] == 'x' || s_[pos_] == 'y' || s_[pos_] == 'i')) {
        p = p * factor();  // implicit product, e.g. 2x or (x+y)(x-y)
      } else {
        return p;
      }
    }
  }

  Poly2 factor() {
    Poly2 b = base();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      b = b.pow(std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return b;
  }

  Poly2 base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly2 p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == 'x') {
      ++pos_;
      return Poly2::x();
    }
    if (c == 'y') {
      ++pos_;
      return Poly2::y();
    }
    if (c == 'i') {
      ++pos_;
      return Poly2::constant({0, 1});
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly2::constant({mpz_class(std::string(s_.substr(start, pos_ - start))), 0});
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly2 parse_poly2(std::string_view text) { return Parser(text).parse(); }

// ------------------------------------------------------------ binary forms

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw parse_error("binary form: bad integer '" + s + "' in " + context);
  }
}

// "2m+1", "m", "-m", "3n-2", "4"
AffineIndex parse_affine(const std::string& raw, char var) {
  std::string s = strip_spaces(raw);
  auto at = s.find(var);
  if (at == std::string::npos) throw parse_error("binary form: index '" + raw + "' must mention " + var);
  std::string coef = s.substr(0, at);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  AffineIndex a;
  if (coef.empty() || coef == "+") a.scale = 1;
  else if (coef == "-") a.scale = -1;
  else a.scale = parse_long(coef, raw);
  std::string rest = s.substr(at + 1);
  a.offset = rest.empty() ? 0 : parse_long(rest[0] == '+' ? rest.substr(1) : rest, raw);
  if (a.scale == 0) throw parse_error("binary form: zero index scale in '" + raw + "'");
  return a;
}

SignCharacter parse_sign(const std::string& raw) {
  std::string s = strip_spaces(raw);
  SignCharacter sc;
  if (s == "1" || s == "+1") return sc;
  if (s == "-1") {
    sc.negate = true;
    return sc;
  }
  const std::string prefix = "(-1)^";
  if (s.rfind(prefix, 0) != 0) throw parse_error("binary form: bad sign '" + raw + "'");
  std::string e = s.substr(prefix.size());
  if (!e.empty() && e.front() == '(') {
    if (e.back() != ')') throw parse_error("binary form: bad sign '" + raw + "'");
    e = e.substr(1, e.size() - 2);
  }
  std::stringstream parts(e);
  std::string tok;
  while (std::getline(parts, tok, '+')) {
    if (tok == "m") sc.use_m = !sc.use_m;
    else if (tok == "n") sc.use_n = !sc.use_n;
    else if (tok == "1") sc.negate = !sc.negate;
    else throw parse_error("binary form: bad sign term '" + tok + "'");
  }
  return sc;
}

std::string format_affine(const AffineIndex& a, char var) {
  std::string s;
  if (a.scale == -1) s = "-";
  else if (a.scale != 1) s = std::to_string(a.scale);
  s += var;
  if (a.offset > 0) s += "+" + std::to_string(a.offset);
  else if (a.offset < 0) s += std::to_string(a.offset);
  return s;
}

}  // namespace

BinaryFormSpec parse_binary_form(std::string_view text) {
  BinaryFormSpec spec;
  bool have_p = false;
  std::stringstream fields{std::string(text)};
  std::string field;
  while (std::getline(fields, field, ';')) {
    if (trim(field).empty()) continue;
    auto eq = field.find('=');
    if (eq == std::string::npos) throw parse_error("binary form: field '" + trim(field) + "' lacks '='");
    std::string key = trim(field.substr(0, eq));
    std::string value = trim(field.substr(eq + 1));
    if (key == "P") {
      spec.numerator = parse_poly2(value);
      have_p = true;
    } else if (key == "Q") {
      std::stringstream cs(value);
      std::string a, b, c, extra;
      if (!std::getline(cs, a, ',') || !std::getline(cs, b, ',') || !std::getline(cs, c, ',') ||
          std::getline(cs, extra, ',')) {
        throw parse_error("binary form: Q needs three coefficients a,b,c");
      }
      spec.qa = parse_long(trim(a), "Q");
      spec.qb = parse_long(trim(b), "Q");
      spec.qc = parse_long(trim(c), "Q");
    } else if (key == "x") {
      spec.x = parse_affine(value, 'm');
    } else if (key == "y") {
      spec.y = parse_affine(value, 'n');
    } else if (key == "sign") {
      spec.sign = parse_sign(value);
    } else if (key == "scale") {
      try {
        spec.scale = mpq_class(strip_spaces(value));
        spec.scale.canonicalize();
      } catch (const std::exception&) {
        throw parse_error("binary form: bad scale '" + value + "'");
      }
    } else if (key == "power") {
      spec.power = static_cast<int>(parse_long(value, "power"));
      if (spec.power < 1) throw parse_error("binary form: power must be positive");
    } else if (key == "origin") {
      if (value == "exclude") spec.exclude_origin = true;
      else if (value == "include") spec.exclude_origin = false;
      else throw parse_error("binary form: origin must be include or exclude");
    } else {
      throw parse_error("binary form: unknown field '" + key + "'");
    }
  }
  if (!have_p) throw parse_error("binary form: missing numerator P");
  if (spec.qa <= 0 || spec.qc <= 0 || 4 * spec.qa * spec.qc - spec.qb * spec.qb <= 0) {
    throw parse_error("binary form: Q is not positive definite");
  }
  return spec;
}

std::string format_binary_form(const BinaryFormSpec& spec) {
  std::ostringstream os;
  os << "P=" << spec.numerator.to_string() << "; Q=" << spec.qa << "," << spec.qb << "," << spec.qc
     << "; x=" << format_affine(spec.x, 'm') << "; y=" << format_affine(spec.y, 'n');
  if (!spec.sign.trivial() || spec.sign.negate) {
    if (spec.sign.trivial()) {
      os << "; sign=-1";
    } else {
      std::string e;
      if (spec.sign.use_m) e += "m";
      if (spec.sign.use_n) e += e.empty() ? "n" : "+n";
      if (spec.sign.negate) e += "+1";
      os << "; sign=(-1)^" << (e.size() > 1 ? "(" + e + ")" : e);
    }
  }
  if (spec.scale != 1) os << "; scale=" << spec.scale.get_str();
  os << "; power=" << spec.power;
  if (!spec.exclude_origin) os << "; origin=include";
  return os.str();
}

}  // namespace elv
