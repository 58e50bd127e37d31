#pragma once

// Critical L-values of cusp forms given as integer combinations of eta
// quotients, via the Mellin integral split at y0:
//   L(f,s) = 1/Gamma(s) sum a_n n^-s Gamma(s, 2 pi n y0)
//          + (2 pi)^s / Gamma(s) int_0^y0 f(iy) y^(s-1) dy.

#include "elv/precision.hpp"
#include "elv/qseries.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elv {

struct ModularFormSpec {
  std::string name;
  int weight = 0;
  int level = 0;  ///< metadata only
  EtaCombination source;
};

/// Builds a spec from eta-combination text; weight from the exponents.
ModularFormSpec make_form(std::string name, std::string_view eta_text, int level = 0);
/// Forms known by name: g, h, f1, f2, f0, eta6-4, eta3-2-6, eta3-1-7, eta3-3-5,
/// eta3-1-15, eta3-15-plus, eta3-15-minus, martin-8a, martin-8b, martin-8c.
const ModularFormSpec& named_form(std::string_view name);
std::vector<std::string> named_form_names();

/// f(iy) for y > 0, assembled from eta factors in log space.
Real form_at(const ModularFormSpec& f, const Real& y, const PrecisionContext& ctx);

struct LValueOptions {
  /// Split point of the Mellin integral.
  double y0 = 1.0;
};

/// L(f, s) for 1 <= s <= weight - 1. Throws domain_error for non-cusp forms or
/// s outside the critical strip.
Real lvalue(const ModularFormSpec& f, int s, const PrecisionContext& ctx, LValueOptions opt = {});

/// Closed form for eta^3(r tau) eta^3(s tau), r + s = 0 mod 8:
/// 8/sqrt(r s^3) k k' K(k)^2 with k the singular value of r/s. The theta form
/// 2 pi^2/sqrt(r s^3) theta2^2 theta4^2 at q = exp(-pi sqrt(r/s)) is computed too
/// and the two must agree; convergence_error otherwise.
Real lvalue_weight3(int r, int s, const PrecisionContext& ctx);

/// L(f, 8) for the weight 9 form 1/4 sum (m - i n)^8 q^(m^2+n^2), as
/// 1/2 zeta(8) E4(i)^2 with E4(i) = g2(i) / (120 zeta(4)).
Real lvalue_weight9_s8(const PrecisionContext& ctx);

struct CriticalRatio {
  mpq_class rational;
  int pi_power = 0;  ///< L(f,s1)/L(f,s2) = rational * pi^pi_power
};
/// Detects L(f,s1)/L(f,s2) = r * pi^(s1-s2) with r of denominator <= 10^6.
std::optional<CriticalRatio> critical_ratio(const ModularFormSpec& f, int s1, int s2, const PrecisionContext& ctx);

/// Plain partial sum sum_{n<=N} a_n n^-s. Low-accuracy cross-check only.
Real lvalue_partial_sum(const ModularFormSpec& f, int s, long N, const PrecisionContext& ctx);

}  // namespace elv
