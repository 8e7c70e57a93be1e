#pragma once

#include "mor/state_space.h"

namespace mor {

/// Solution of A P + P A' = -Q.
struct GramianResult {
  Matrix p;
  /// |A P + P A' + Q|_F / max(|Q|_F, eps)
  double residual = 0.0;
};

/// Bartels-Stewart on the real Schur form of A (1x1 and 2x2 diagonal blocks).
/// Throws kIllPosedLyapunov when some pair of eigenvalues sums to
/// (numerically) zero, e.g. an uncancelled pair on the imaginary axis.
GramianResult SolveLyapunov(const Matrix& a, const Matrix& q);

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// Symmetrizes X as (X + X') / 2 before decomposing.
SymEig SymEigAscending(const Matrix& x);

struct TruncatedSvd {
  CMatrix u;  // p x r
  Vector s;   // r, nonincreasing
  CMatrix v;  // q x r
};

/// Best rank-r approximation U diag(s) V^* of M. Throws kRankOutOfRange
/// unless 1 <= r <= min(rows, cols).
TruncatedSvd SvdTruncate(const CMatrix& m, int rank);

// Eigenvalue classification used by the weight selection: lambda counts as
// zero when lambda <= kZeroEigTol * lambda_max, and neighbours are distinct
// when their gap exceeds kEigGapTol * lambda_max.
inline constexpr double kZeroEigTol = 1e-9;
inline constexpr double kEigGapTol = 1e-9;

}  // namespace mor
