#pragma once

// Truncated q-expansions with exact integer coefficients.

#include "elv/binary_form.hpp"
#include "elv/precision.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace elv {

/// sum_n coeffs[n] q^(lead + n). Coefficients are known exactly for every
/// exponent up to bound() = lead + coeffs.size() - 1 and unknown beyond.
struct QSeries {
  mpq_class lead = 0;
  std::vector<mpz_class> coeffs;

  std::size_t order() const { return coeffs.size(); }
  mpq_class bound() const { return lead + static_cast<long>(coeffs.size()) - 1; }
  /// Coefficient of q^exponent; zero below lead or off the lead's residue
  /// class. Throws domain_error beyond bound().
  mpz_class at(const mpq_class& exponent) const;
  /// Coefficient a_n of q^n for a series with integer lead.
  mpz_class a(long n) const { return at(mpq_class(n)); }
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator*(const mpz_class& c, const QSeries& a);
QSeries operator*(const QSeries& a, const QSeries& b);
/// a^e for any integer e; the leading coefficient must be +1 or -1.
QSeries power(const QSeries& a, long e);
/// Leading zeros removed; lead advanced accordingly.
QSeries trimmed(const QSeries& a);

/// prod_m eta(m tau)^e_m, stored as sorted (m, e) pairs with distinct m.
struct EtaQuotientSpec {
  std::vector<std::pair<int, int>> factors;

  mpq_class weight() const;
  mpq_class lead() const;
  friend bool operator==(const EtaQuotientSpec&, const EtaQuotientSpec&) = default;
};

/// Integer linear combination of eta quotients, e.g. "eta(3)^3*eta(5)^3 - eta(1)^3*eta(15)^3".
struct EtaCombination {
  std::vector<std::pair<mpz_class, EtaQuotientSpec>> terms;
  mpq_class weight() const;
};

/// "eta(1)^4*eta(2)^2*eta(4)^4", "eta(8)^38/(eta(4)^14*eta(16)^14)", "eta(4)^6".
EtaQuotientSpec parse_eta_quotient(std::string_view text);
std::string format_eta_quotient(const EtaQuotientSpec& spec);
EtaCombination parse_eta_combination(std::string_view text);
std::string format_eta_combination(const EtaCombination& combo);

/// Exact expansion of the eta quotient for all exponents <= N.
QSeries eta_quotient_expand(const EtaQuotientSpec& spec, long N);
QSeries eta_combination_expand(const EtaCombination& combo, long N);

/// q^lead * prod_factors prod_{n>=1} (1 - eps_n q^(m n))^e, eps_n = (-1)^n when
/// alternating, else 1.
struct ProductFactor {
  int m = 1;
  bool alternating = false;
  int exponent = 1;
};
struct ProductSpec {
  mpq_class lead = 0;
  std::vector<ProductFactor> factors;
};
QSeries product_expand(const ProductSpec& spec, long N);

/// scale * sum sigma(m,n) P(x,y) q^Q(x,y) over lattice points with Q <= N.
/// Throws domain_error if an imaginary part survives or a coefficient is not
/// an integer after scaling.
QSeries theta_expand(const BinaryFormSpec& spec, long N);

/// sum_{n>=1} n chi_{-4}(n) q^(n^2/8), the triple-product form of eta^3.
QSeries jacobi_eta3_series(long N);

struct SeriesComparison {
  bool equal = true;
  std::optional<mpq_class> first_mismatch;  ///< exponent of the first differing coefficient
};
/// Compares every exponent <= N. Throws domain_error if either series is not
/// known that far or the leads are incompatible.
SeriesComparison series_equal(const QSeries& a, const QSeries& b, long N);

struct MultiplicativityResult {
  bool multiplicative = true;
  std::optional<std::pair<long, long>> first_violation;  ///< (m, n) with a_mn != a_m a_n
};
/// Checks a_{mn} = a_m a_n for coprime m, n with mn <= N. Needs lead 1, a_1 = 1.
MultiplicativityResult multiplicativity_check(const QSeries& a, long N);

/// -f(-q): coefficients of even powers of q change sign.
QSeries twist_negate(const QSeries& a);

/// Partial-sum value at 0 < q < 1.
Real evaluate(const QSeries& a, const Real& q);

struct Weight9Check {
  Real series_value;
  Real theta_value;
  int digits = 0;
};
/// Compares 1/4 sum (m - i n)^8 q^(m^2+n^2) (expanded to N) against
/// 8 (4 k^2 k'^2 + k^4 k'^4) K^9 / pi^9 at the nome q.
Weight9Check weight9_ktheta_check(const Real& q, long N, const PrecisionContext& ctx);
BinaryFormSpec weight9_theta_spec();

}  // namespace elv
