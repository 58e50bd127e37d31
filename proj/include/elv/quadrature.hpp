#pragma once

#include "elv/precision.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace elv {

/// Endpoint behaviour f ~ x^a |log x|^L near 0 and (1-x)^b |log(1-x)|^M near
/// 1. Only used to size the truncation of the transformed sum.
struct SingularityProfile {
  double left_exponent = 0.0;
  int left_log_power = 0;
  double right_exponent = 0.0;
  int right_log_power = 0;
};

/// An integrand on (0,1). The evaluator receives x and 1-x separately; both
/// are accurate to full relative precision even when x is within rounding of
/// an endpoint.
struct Integrand {
  using Evaluator = std::function<Real(const Real& x, const Real& one_minus_x, const PrecisionContext&)>;

  std::string id;
  Evaluator evaluator;
  SingularityProfile profile;
  std::string description;
};

struct QuadResult {
  Real value;
  /// |T_l - T_{l-1}| / |T_l| for the last two levels.
  Real error_estimate;
  int levels_used = 0;
  /// Trapezoidal estimates T_0..T_l, one per level.
  std::vector<Real> level_values;
};

/// Double-exponential quadrature over (0,1): x = (1 + tanh(pi/2 sinh t))/2,
/// step h = 2^-level, halving until two levels agree to target digits.
/// Throws convergence_error after max_level.
QuadResult tanh_sinh(const Integrand& f, const PrecisionContext& ctx, int max_level = 12);

/// Cataloged moment integrals of complete elliptic integrals over (0,1).
const Integrand& moment_integrand(std::string_view id);
std::vector<std::string> moment_ids();
Real moment(std::string_view id, const PrecisionContext& ctx);

/// moment(id_a) / moment(id_b).
Real lvalue_ratio_integrals(std::string_view id_a, std::string_view id_b, const PrecisionContext& ctx);

}  // namespace elv
