#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mor/norms.h"
#include "mor/report.h"
#include "mor/state_space.h"

namespace mor {

/// Interpolation frequency with its cached transfer sample G(j omega).
struct SupportPoint {
  double omega = 0.0;
  CMatrix sample;

  bool is_zero() const { return omega == 0.0; }
};

SupportPoint MakeSupportPoint(const StateSpace& g, double omega);

/// Real realization of one support point's [N_k M_k] pair:
///
///   [N_k M_k] = [ A_k | B_k1  B_k2 ]
///               [  I  |  0     0   ]
///
/// A_k is 0 (p states) at omega = 0 and [[0, wI], [-wI, 0]] (2p states,
/// conjugate pair folded in) otherwise.
struct BlockRealization {
  Matrix a;
  Matrix b1;  // d x q, drives N_k
  Matrix b2;  // d x p, drives M_k

  int states() const { return static_cast<int>(a.rows()); }
};

/// Row block W = [W_0 W_1 ... W_l] of the interpolant weights.
struct WeightMatrix {
  Matrix w;
  double w0_condition = 1.0;
  Vector selected_eigenvalues;
  /// True when the selected eigenvalues were not pairwise distinct.
  bool degenerate = false;
};

struct Interpolant {
  StateSpace sys;
  std::vector<SupportPoint> support;
  /// Interpolation rank per support point (p for full interpolation).
  std::vector<int> ranks;
  WeightMatrix weights;
  int order = 0;
};

struct ReduceOptions {
  /// Defaults to 10 when neither a target order nor a target error is set,
  /// otherwise unbounded (capped at 1000).
  std::optional<int> max_iterations;
  std::optional<double> target_linf;
  std::optional<int> target_order;
  bool keep_best = true;
  double bisect_tol = kDefaultBisectTol;
  double minreal_tol = kDefaultMinRealTol;
  double w0_condition_cap = 1e12;
  /// Low-rank only: relative radius inside which a peak grows an existing
  /// point's rank instead of adding a point.
  double min_dist = 0.02;
};

struct ReductionResult {
  Interpolant interpolant;
  ReductionReport report;
  /// Every iterate in order; entry i pairs with report.iterations[i].
  std::vector<Interpolant> iterates;
};

BlockRealization BuildBlock(const SupportPoint& point);

/// [N M] stacked over all blocks with the static W_0 channel on top:
///
///   [ A  | B1  B2 ]      A = blkdiag(A_k)
///   [ 0  | D   I  ]
///   [ I  | 0   0  ]
StateSpace StackBlocks(std::span<const BlockRealization> blocks,
                       const Matrix& d);

/// H = minreal([N M] [I; -G]). The +-j omega_k block modes are removed
/// exactly by decoupling them from G's states (a small Sylvester solve per
/// block) instead of by rank decisions; what remains goes through MinReal.
/// Throws kResidualImaginaryPoles if the block modes are not actually
/// uncontrollable or an imaginary-axis pole survives.
StateSpace AssembleErrorSystem(std::span<const BlockRealization> blocks,
                               const StateSpace& g,
                               double minreal_tol = kDefaultMinRealTol);

/// X = C_H P C_H' with A_H P + P A_H' = -B_H B_H', symmetrized. This is
/// (1 / 2pi) times the integral of H H^* over the whole imaginary axis, i.e.
/// (1 / pi) Re of the integral over omega >= 0.
Matrix ComputeX(const StateSpace& h);

/// Rows of W are the eigenvectors of the p smallest distinct nonzero
/// eigenvalues of X. Repeated eigenvalues fall back to orthonormal
/// eigenvectors with `degenerate` set; fewer than p nonzero eigenvalues throw
/// kInsufficientSpectrum.
WeightMatrix SolveWeights(const Matrix& x, int p);

/// R = [A - B2 What | B2 D - B1; -What | D] with What = W_0^{-1} W_1.
/// Throws kSingularW0 when cond(W_0) exceeds `condition_cap`.
StateSpace RealizeInterpolant(std::span<const BlockRealization> blocks,
                              const WeightMatrix& w, const Matrix& d,
                              double condition_cap = 1e12);

/// Condition number of every per-point weight W_k, taken in its complex form
/// (W_k = (W_k,re + j W_k,im) / 2 for conjugate-pair blocks).
std::vector<double> BlockWeightConditions(
    std::span<const BlockRealization> blocks, const WeightMatrix& w,
    std::span<const SupportPoint> support);

/// Adaptive system-AAA: starting from R = D, repeatedly place a support
/// point at the peak of sigma_max(G - R), re-optimize the weights and
/// re-realize R.
ReductionResult Reduce(const StateSpace& g, const ReduceOptions& opts = {});

namespace internal {

// Shared by the system-AAA and low-rank drivers.
struct Fit {
  StateSpace sys;
  WeightMatrix weights;
};
Fit FitInterpolant(const StateSpace& g,
                   std::span<const BlockRealization> blocks,
                   const ReduceOptions& opts);

struct ErrorStats {
  LinfResult linf;
  double h2 = 0.0;
  bool stable = true;
};
ErrorStats MeasureError(const StateSpace& g, const StateSpace& r,
                        const ReduceOptions& opts);

int MaxIterations(const ReduceOptions& opts);
bool IsDuplicate(double omega, double existing);
double SnapToZero(double omega);
int PickReturned(const std::vector<IterationRecord>& records, bool keep_best);

}  // namespace internal
}  // namespace mor
