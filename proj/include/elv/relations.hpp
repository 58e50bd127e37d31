#pragma once

// PSLQ integer relations and multiplicative closed-form discovery.

#include "elv/closed_form.hpp"
#include "elv/errors.hpp"
#include "elv/precision.hpp"

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elv {

/// PSLQ ran out of input precision before reaching its coefficient bound.
class insufficient_precision : public convergence_error {
 public:
  using convergence_error::convergence_error;
};

struct Relation {
  std::vector<mpz_class> coefficients;  ///< gcd 1, first non-zero entry positive
  Real norm;                            ///< Euclidean norm of the coefficients
  Real residual;                        ///< |sum c_i x_i| at working precision
};

/// Ferguson-Bailey PSLQ (gamma = sqrt(4/3)) at the precision of ctx. The values
/// are taken to be accurate to ctx.target_digits(). Returns nullopt when every
/// relation must have norm above 10^max_coeff_digits.
std::optional<Relation> pslq(const std::vector<Real>& values, const PrecisionContext& ctx, int max_coeff_digits);

/// Ordered named constants whose logarithms form a PSLQ basis.
struct ConstantBasis {
  std::string name;
  std::vector<std::string> constants;  ///< ClosedForm constant names
};

/// Curated bases: quarter, quarter-wide, third, seventh, eighth, fifteenth.
const ConstantBasis& named_basis(std::string_view name);
std::vector<std::string> named_basis_names();

struct Discovery {
  ClosedForm form;
  Relation relation;
  int value_digits = 0;
  int verified_digits = 0;  ///< agreement at the re-verification precision
};

/// Searches value = rational * prod basis^e with a PSLQ run on
/// [log value, log basis...]. A candidate is re-checked by recomputing the value
/// and the form 20 digits further; nullopt if none is found or the re-check fails.
std::optional<Discovery> discover_gamma_form(const std::function<Real(const PrecisionContext&)>& value,
                                             const ConstantBasis& basis, const PrecisionContext& ctx);

}  // namespace elv
