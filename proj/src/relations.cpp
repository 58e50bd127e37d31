#include "elv/relations.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace elv {

namespace {

// Nearest integer to a Real, ties away from zero.
mpz_class nint(const Real& x) {
  Real r(x.bits());
  mpfr_round(r.raw(), x.get());
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
  return z;
}

void normalize(std::vector<mpz_class>& c) {
  mpz_class g = 0;
  for (const auto& v : c) g = gcd(g, v);
  if (g > 1) {
    for (auto& v : c) v /= g;
  }
  auto first = std::find_if(c.begin(), c.end(), [](const mpz_class& v) { return v != 0; });
  if (first != c.end() && *first < 0) {
    for (auto& v : c) v = -v;
  }
}

}  // namespace

std::optional<Relation> pslq(const std::vector<Real>& values, const PrecisionContext& ctx, int max_coeff_digits) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw domain_error("pslq: need at least two values");
  const mpfr_prec_t bits = ctx.bits();
  const int digits = ctx.target_digits();
  for (const auto& v : values) {
    if (v.is_zero()) {
      // A zero entry is itself a relation.
      std::vector<mpz_class> c(n, 0);
      c[&v - values.data()] = 1;
      return Relation{c, Real(1L, bits), Real(bits)};
    }
  }
  if (static_cast<long>(n) * max_coeff_digits + 20 > digits) {
    throw insufficient_precision("pslq: " + std::to_string(digits) + " digits cannot certify " + std::to_string(n) +
                                 " coefficients of " + std::to_string(max_coeff_digits) + " digits");
  }

  const Real gamma = sqrt(Real(mpq_class(4, 3), bits));
  std::vector<Real> x;
  Real scale(bits);
  for (const auto& v : values) scale = max(scale, abs(v));
  for (const auto& v : values) x.push_back(v.with_bits(bits) / scale);

  // s_k = sqrt(sum_{j >= k} x_j^2), y = x / s_0
  std::vector<Real> s(n, Real(bits));
  Real acc(bits);
  for (int k = n - 1; k >= 0; --k) {
    acc += x[k] * x[k];
    s[k] = sqrt(acc);
  }
  const Real t0 = s[0];
  std::vector<Real> y(n, Real(bits));
  for (int k = 0; k < n; ++k) {
    y[k] = x[k] / t0;
    s[k] /= t0;
  }
  // H is n x (n-1), lower trapezoidal.
  std::vector<std::vector<Real>> H(n, std::vector<Real>(n - 1, Real(bits)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n - 1; ++j) {
      if (i == j) H[i][j] = s[j + 1] / s[j];
      else if (i > j) H[i][j] = -(y[i] * y[j]) / (s[j] * s[j + 1]);
    }
  }
  std::vector<std::vector<mpz_class>> B(n, std::vector<mpz_class>(n, 0));
  for (int i = 0; i < n; ++i) B[i][i] = 1;

  auto reduce = [&](int i_from) {
    for (int i = i_from; i < n; ++i) {
      for (int j = std::min(i - 1, n - 2); j >= 0; --j) {
        if (H[j][j].is_zero()) continue;
        const mpz_class t = nint(H[i][j] / H[j][j]);
        if (t == 0) continue;
        const Real tr(t, bits);
        y[j] += tr * y[i];
        for (int k = 0; k <= j; ++k) H[i][k] -= tr * H[j][k];
        for (int k = 0; k < n; ++k) B[k][j] += t * B[k][i];
      }
    }
  };
  reduce(1);

  const Real detect = pow(Real(10L, bits), static_cast<long>(-(digits - 5)));
  const Real coeff_bound = pow(Real(10L, bits), static_cast<long>(max_coeff_digits));
  const Real precision_bound = pow(Real(10L, bits), static_cast<long>((digits - 10) / n));

  auto make_relation = [&](int col) -> std::optional<Relation> {
    std::vector<mpz_class> c(n);
    for (int k = 0; k < n; ++k) c[k] = B[k][col];
    normalize(c);
    Real res(bits), norm2(bits);
    for (int k = 0; k < n; ++k) {
      res += Real(c[k], bits) * values[k].with_bits(bits);
      norm2 += Real(mpz_class(c[k] * c[k]), bits);
    }
    const Real norm = sqrt(norm2);
    if (norm > coeff_bound) return std::nullopt;
    // Certification: residual at the accuracy of the inputs.
    if (abs(res) > detect * scale * max(norm, Real(1L, bits))) return std::nullopt;
    return Relation{c, norm, abs(res)};
  };

  const int max_iterations = 200 * n * n + 10000;
  for (int iter = 0; iter < max_iterations; ++iter) {
    // Select m maximizing gamma^(m+1) |H_mm|.
    int m = 0;
    Real best(bits);
    Real gpow = gamma;
    for (int i = 0; i < n - 1; ++i) {
      Real v = gpow * abs(H[i][i]);
      if (v > best) {
        best = v;
        m = i;
      }
      gpow *= gamma;
    }
    std::swap(y[m], y[m + 1]);
    std::swap(H[m], H[m + 1]);
    for (int k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
    if (m < n - 2) {
      const Real a = H[m][m], b = H[m][m + 1];
      const Real r = hypot(a, b);
      const Real c1 = a / r, c2 = b / r;
      for (int i = m; i < n; ++i) {
        const Real h3 = H[i][m], h4 = H[i][m + 1];
        H[i][m] = c1 * h3 + c2 * h4;
        H[i][m + 1] = c1 * h4 - c2 * h3;
      }
    }
    reduce(m + 1);

    int jmin = 0;
    for (int j = 1; j < n; ++j) {
      if (abs(y[j]) < abs(y[jmin])) jmin = j;
    }
    if (abs(y[jmin]) < detect) {
      if (auto rel = make_relation(jmin)) return rel;
    }
    for (int j = 0; j < n - 1; ++j) {
      if (H[j][j].is_zero()) {
        if (auto rel = make_relation(j)) return rel;
      }
    }
    // Any relation has norm >= 1 / max |H_jj|.
    Real hmax(bits);
    for (int j = 0; j < n - 1; ++j) hmax = max(hmax, abs(H[j][j]));
    const Real norm_bound = 1L / hmax;
    if (norm_bound > coeff_bound) return std::nullopt;
    if (norm_bound > precision_bound) {
      throw insufficient_precision("pslq: relation norm bound exceeds what " + std::to_string(digits) +
                                   " digits can resolve");
    }
  }
  throw convergence_error("pslq: iteration limit reached");
}

namespace {

const std::map<std::string, ConstantBasis, std::less<>>& basis_table() {
  static const auto table = [] {
    std::map<std::string, ConstantBasis, std::less<>> t;
    auto add = [&](const char* name, std::vector<std::string> c) { t.emplace(name, ConstantBasis{name, std::move(c)}); };
    add("quarter", {"2", "3", "5", "pi", "Gamma(1/4)"});
    add("quarter-wide", {"2", "3", "5", "7", "13", "pi", "Gamma(1/4)"});
    add("third", {"2", "3", "pi", "Gamma(1/3)"});
    add("seventh", {"2", "7", "pi", "Gamma(1/7)", "Gamma(2/7)", "Gamma(4/7)"});
    add("eighth", {"2", "3", "pi", "Gamma(1/8)", "Gamma(3/8)"});
    add("fifteenth", {"2", "3", "5", "pi", "Gamma(1/15)", "Gamma(2/15)", "Gamma(4/15)", "Gamma(8/15)"});
    return t;
  }();
  return table;
}

}  // namespace

const ConstantBasis& named_basis(std::string_view name) {
  auto it = basis_table().find(name);
  if (it == basis_table().end()) throw domain_error("unknown basis '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> named_basis_names() {
  std::vector<std::string> out;
  for (const auto& [k, _] : basis_table()) out.push_back(k);
  return out;
}

std::optional<Discovery> discover_gamma_form(const std::function<Real(const PrecisionContext&)>& value,
                                             const ConstantBasis& basis, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const Real v = value(ctx);
  if (v.sign() <= 0) throw domain_error("discover_gamma_form: value must be positive");
  std::vector<Real> logs{log(v)};
  for (const auto& c : basis.constants) logs.push_back(log(constant_value(c, bits)));
  const int n = static_cast<int>(logs.size());
  const int coeff_digits = std::clamp((ctx.target_digits() - 20) / n, 1, 6);
  std::optional<Relation> rel = pslq(logs, ctx, coeff_digits);
  if (!rel || rel->coefficients[0] == 0) return std::nullopt;

  // c0 log v + sum c_i log b_i = 0  =>  v = prod b_i^(-c_i / c0)
  ClosedForm cf;
  const mpz_class c0 = rel->coefficients[0];
  for (int i = 1; i < n; ++i) {
    if (rel->coefficients[i] == 0) continue;
    mpq_class e(-rel->coefficients[i], c0);
    e.canonicalize();
    cf.exponents[basis.constants[i - 1]] += e;
  }
  cf.canonicalize();

  const PrecisionContext check = ctx.with_target(ctx.target_digits() + 20);
  const Real v2 = value(check);
  const Real f2 = evaluate(cf, check);
  const int verified = digits_agreement(v2, f2);
  if (verified < check.target_digits() - 5) return std::nullopt;
  return Discovery{cf, *rel, ctx.target_digits(), verified};
}

}  // namespace elv
