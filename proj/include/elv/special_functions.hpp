#pragma once

#include "elv/precision.hpp"

#include <gmpxx.h>

#include <vector>

namespace elv {

/// Gamma function; reflection handles x < 1/2. Throws domain_error at poles.
Real gamma(const Real& x, const PrecisionContext& ctx);

/// Arithmetic-geometric mean of positive a, b.
Real agm(const Real& a, const Real& b, const PrecisionContext& ctx);

/// K(k) for 0 <= k < 1. The complement (1-k)(1+k) is formed in factored form.
Real ellK(const Real& k, const PrecisionContext& ctx);
/// K(k) given the complementary modulus k' = sqrt(1 - k^2) directly; this is
/// the accurate route when k is within rounding of 1.
Real ellK_from_complement(const Real& kprime, const PrecisionContext& ctx);
/// K'(k) = K(sqrt(1-k^2)) for 0 < k <= 1, computed as pi / (2 agm(1, k)).
Real ellKprime(const Real& k, const PrecisionContext& ctx);

/// E(k) for 0 <= k <= 1; E(1) = 1.
Real ellE(const Real& k, const PrecisionContext& ctx);
/// E(k) from the pair (k, k') when both are known to full relative accuracy.
Real ellE_pair(const Real& k, const Real& kprime, const PrecisionContext& ctx);

/// Elliptic nome q = exp(-pi K'(sqrt(alpha)) / K(sqrt(alpha))), 0 < alpha < 1.
Real nome(const Real& alpha, const PrecisionContext& ctx);

/// Jacobi theta functions of nome 0 <= q < 1 (q^{n^2} convention).
Real theta2(const Real& q, const PrecisionContext& ctx);
Real theta3(const Real& q, const PrecisionContext& ctx);
Real theta4(const Real& q, const PrecisionContext& ctx);

/// Modulus k = theta2^2/theta3^2 and complement k' = theta4^2/theta3^2 at nome q.
struct ModulusPair {
  Real k;
  Real kprime;
};
ModulusPair modulus_from_nome(const Real& q, const PrecisionContext& ctx);

/// eta(iy) = exp(log_scale) * product. Splitting off the exponential factor
/// lets callers combine many eta factors without underflow.
struct EtaParts {
  Real log_scale;
  Real product;
};
EtaParts eta_parts(const Real& y, const PrecisionContext& ctx);
/// Dedekind eta at tau = iy, y > 0. Uses eta(iy) = eta(i/y)/sqrt(y) for y < 1.
Real eta(const Real& y, const PrecisionContext& ctx);
/// Direct q-product with q = exp(-2 pi y), no inversion. Reference path.
Real eta_product(const Real& y, const PrecisionContext& ctx);

struct HypergeometricResult {
  Real value;
  int achieved_digits = 0;
};

/// Generalized hypergeometric pFq(upper; lower; z) for real z. With
/// `accelerate` the partial sums at z = 1 are passed through a Levin
/// u-transform; otherwise the series is summed directly.
HypergeometricResult pFq(const std::vector<mpq_class>& upper, const std::vector<mpq_class>& lower,
                         const Real& z, const PrecisionContext& ctx, bool accelerate);

/// Gamma(s, x) for integer s >= 1 via the finite sum (s-1)! e^-x sum x^j/j!.
Real incomplete_gamma_int(int s, const Real& x, const PrecisionContext& ctx);

/// Weierstrass invariant g2(iy) of the lattice Z + iyZ.
Real g2(const Real& y, const PrecisionContext& ctx);

struct SingularValue {
  mpq_class p;
  Real k;       ///< modulus with K'(k)/K(k) = sqrt(p)
  Real kprime;  ///< sqrt(1 - k^2), computed independently from theta4
};
SingularValue singular_value(const mpq_class& p, const PrecisionContext& ctx);

}  // namespace elv
