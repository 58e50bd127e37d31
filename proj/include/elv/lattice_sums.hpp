#pragma once

// Conditionally convergent sums over Z^2 of scale * sigma(m,n) * Re P(x,y) / Q(x,y)^power,
// x = a1 m + b1, y = a2 n + b2 (see binary_form.hpp for BinaryFormSpec and its text form).
//
// The numerator's imaginary part is dropped; for the symmetric specs used here
// it sums to zero.

#include "elv/binary_form.hpp"
#include "elv/precision.hpp"

#include <array>
#include <string>
#include <vector>

namespace elv {

using LatticeSumSpec = BinaryFormSpec;

LatticeSumSpec parse_lattice_spec(std::string_view text);

/// Exact partial sums over max(|m|,|n|) <= K for K = 0..M, accumulated at
/// working precision in one pass over expanding square shells.
std::vector<Real> rect_partial_sums(const LatticeSumSpec& spec, long M, const PrecisionContext& ctx);
Real rect_sum(const LatticeSumSpec& spec, long M, const PrecisionContext& ctx);

/// Partial sum over Q(x,y) <= R.
Real ellipse_partial_sum(const LatticeSumSpec& spec, long R, const PrecisionContext& ctx);

/// Full sum over n for one raw index m, in closed form (partial fractions in y
/// and derivatives of pi cot / pi csc).
Real row_sum(const LatticeSumSpec& spec, long m, const PrecisionContext& ctx);

struct LatticeValue {
  Real value;
  int achieved_digits = 0;
  long rows = 0;  ///< closed-form row sums evaluated
  std::string method;
};

/// Row sums over n, then the outer sequence over |m| <= K either summed
/// directly (when rows decay fast) or passed through a Levin u-transform.
/// Specs with trivial sign must be absolutely convergent. Throws
/// shortfall_error with the best value when target_digits is not reached.
LatticeValue accelerated_sum(const LatticeSumSpec& spec, const PrecisionContext& ctx, int target_digits);

/// Sum ordered by expanding ellipses Q(x,y) <= R. For a numerator of degree
/// 2*power - 2 this is the iterated sum minus the continuum correction
/// int int_{|x| <= 1, Q >= 1} F dx dy / (a1 a2).
LatticeValue ellipse_sum(const LatticeSumSpec& spec, const PrecisionContext& ctx, int target_digits);
/// The continuum correction alone (zero when F decays faster than |.|^-2).
Real ellipse_correction(const LatticeSumSpec& spec, const PrecisionContext& ctx);

struct SidePair {
  Real lhs;
  Real rhs;
  int digits = 0;
};

/// sum (-1)^m / (2n+1+m tau)^4 at tau = 2i by lattice summation against
/// (g2(tau/2) - 18 g2(tau) + 32 g2(2 tau)) / 960.
SidePair g2_combination_check(const PrecisionContext& ctx);
/// sum' (-1)^m / (n + m tau)^4 at tau = iy against (2 g2(2 tau) - g2(tau)) / 60.
SidePair g2_alternating_check(long y, const PrecisionContext& ctx);

/// The three m^2 n^2 / m^4 sums over (m^2+n^2)^3 with their Gamma(1/4) and
/// pi log 2 closed forms.
std::array<SidePair, 3> log2_family_check(const PrecisionContext& ctx, int target_digits = 12);

}  // namespace elv
