#pragma once

#include "elv/precision.hpp"

#include <span>
#include <vector>

namespace elv {

struct AcceleratedValue {
  Real value;
  /// Estimated correct significant digits, from the spread of the last
  /// transformation orders.
  int achieved_digits = 0;
};

/// Levin u-transform of the partial sums S_0..S_{n-1}, where
/// terms[j] = S_j - S_{j-1}. Uses remainder estimates omega_j = (j+1)*terms[j].
/// Evaluated at orders 2..n-1 from the start of the sequence; the last order is
/// returned and the digit estimate compares it with the order before.
/// The arithmetic runs at the precision of the inputs.
AcceleratedValue levin_u(std::span<const Real> partial_sums, std::span<const Real> terms);

/// Single Levin u-transform value of a given order, starting at index 0.
Real levin_u_order(std::span<const Real> partial_sums, std::span<const Real> terms, int order);

}  // namespace elv
