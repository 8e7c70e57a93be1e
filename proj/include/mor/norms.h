#pragma once

#include <limits>

#include "mor/state_space.h"

namespace mor {

inline constexpr double kDefaultBisectTol = 1e-6;

/// Peak of sigma_max(G(j omega)) over omega in [0, inf].
struct LinfResult {
  /// Certified upper bound on the peak gain; the gain at omega_peak is within
  /// a factor (1 + rel_tol) of it.
  double gamma = 0.0;
  /// Frequency (rad/s) attaining the best evaluated gain, or +infinity when
  /// the feedthrough limit D dominates every finite candidate.
  double omega_peak = 0.0;
  int iterations = 0;

  bool peak_at_infinity() const {
    return omega_peak == std::numeric_limits<double>::infinity();
  }
};

/// Two-sided Hamiltonian level-set iteration (Bruinsma-Steinbuch). Valid for
/// unstable systems as long as no pole lies on the imaginary axis; throws
/// kImaginaryAxisPoles when a pole has |Re| <= 1e-8 * max(1, |A|_F).
LinfResult LinfNorm(const StateSpace& sys, double rel_tol = kDefaultBisectTol);

/// sqrt(|tr(C P C')|) with A P + P A' = -B B'. Equals the H2 norm for stable
/// systems; for unstable ones it is only a Gramian-based error score.
/// Throws kNonzeroFeedthrough when D != 0.
double H2ErrorMetric(const StateSpace& err_sys);

}  // namespace mor
