#pragma once

#include <span>

#include "mor/sysaaa.h"

namespace mor {

/// Support point interpolated only through the dominant rank-r part
/// U diag(s) V^* of its sample. At omega = 0 the factors are real.
struct LowRankPoint {
  double omega = 0.0;
  int rank = 1;
  CMatrix sample;
  CMatrix u;  // p x rank
  Vector s;   // rank
  CMatrix v;  // q x rank

  bool is_zero() const { return omega == 0.0; }
};

/// Truncated SVD of `sample` at the given rank, phase-normalized so that the
/// largest entry of every column of U is real and positive.
LowRankPoint MakeLowRankPoint(double omega, CMatrix sample, int rank);

/// [N_k M_k] for a low-rank point: A_k = 0 with B_k1 = S V', B_k2 = U'
/// (rank states) at omega = 0, otherwise the rotation block with
/// B_k1 = [S V_r'; S V_i'] and B_k2 = [U_r'; U_i'] (2 rank states).
/// Throws kDegenerateFactors when a retained singular value is ~0.
BlockRealization BuildLowRankBlock(const LowRankPoint& point);

struct RankAction {
  enum class Kind { kNewPoint, kGrowRank };
  Kind kind = Kind::kNewPoint;
  double omega = 0.0;
  int index = -1;  // point to grow
};

/// Grows the nearest point when |candidate - omega_i| < min_dist *
/// max(1, omega_i) and its rank is below min(p, q); otherwise adds a point.
/// Throws kSaturated when the nearest close point is already full rank.
RankAction SelectOrGrow(double candidate, std::span<const LowRankPoint> points,
                        double min_dist);

/// Low-rank adaptive interpolation. New points enter at rank 1; peaks close
/// to an existing point raise that point's rank. Systems with more outputs
/// than inputs are reduced through their dual.
ReductionResult ReduceLowRank(const StateSpace& g,
                              const ReduceOptions& opts = {});

}  // namespace mor
