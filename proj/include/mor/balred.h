#pragma once

#include "mor/state_space.h"

namespace mor {

struct BalancedResult {
  StateSpace sys;
  /// Hankel singular values of the input, nonincreasing.
  Vector hsv;
};

/// Square-root balanced truncation to `order` states, D kept. Requires a
/// stable input (kUnstableInput otherwise). With order == n the input
/// realization is returned as is.
BalancedResult BalancedTruncate(const StateSpace& g, int order);

/// Hankel singular values sqrt(eig(P Q)), nonincreasing.
Vector HankelSingularValues(const StateSpace& g);

}  // namespace mor
