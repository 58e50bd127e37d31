#include "elv/acceleration.hpp"

#include "elv/errors.hpp"

#include <algorithm>

namespace elv {

Real levin_u_order(std::span<const Real> partial_sums, std::span<const Real> terms, int order) {
  if (order < 1 || static_cast<std::size_t>(order) >= partial_sums.size() ||
      terms.size() != partial_sums.size()) {
    throw domain_error("levin_u: order out of range for sequence length");
  }
  const mpfr_prec_t bits = partial_sums[0].bits();
  const int k = order;
  Real num(bits), den(bits);
  Real binom(1L, bits);
  const Real base(static_cast<long>(k + 1), bits);
  for (int j = 0; j <= k; ++j) {
    if (terms[j].is_zero()) throw convergence_error("levin_u: zero term");
    // ((j+1)/(k+1))^(k-1) * C(k,j) * (-1)^j / omega_j, omega_j = (j+1) a_j
    Real ratio = Real(static_cast<long>(j + 1), bits) / base;
    Real c = pow(ratio, static_cast<long>(k - 1)) * binom;
    if (j & 1) c = -c;
    Real omega = terms[j] * static_cast<long>(j + 1);
    Real w = c / omega;
    num += w * partial_sums[j];
    den += w;
    binom *= static_cast<long>(k - j);
    binom /= static_cast<long>(j + 1);
  }
  return num / den;
}

AcceleratedValue levin_u(std::span<const Real> partial_sums, std::span<const Real> terms) {
  const std::size_t n = partial_sums.size();
  if (n < 3 || terms.size() != n) throw domain_error("levin_u needs at least three partial sums");
  bool has_zero = std::any_of(terms.begin(), terms.end(), [](const Real& t) { return t.is_zero(); });
  if (has_zero) {
    // Terminating or underflowed series: the partial sums are already exact.
    return {partial_sums[n - 1], digits_agreement(partial_sums[n - 1], partial_sums[n - 2])};
  }
  Real previous = levin_u_order(partial_sums, terms, static_cast<int>(n) - 2);
  Real last = levin_u_order(partial_sums, terms, static_cast<int>(n) - 1);
  return {last, digits_agreement(last, previous)};
}

}  // namespace elv
