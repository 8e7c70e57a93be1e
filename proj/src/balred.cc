#include "mor/balred.h"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "mor/errors.h"
#include "mor/numkernels.h"

namespace mor {
namespace {

// Square-root factor L with L L' = X for a symmetric PSD X; negative
// round-off eigenvalues are clipped.
Matrix SqrtFactor(const Matrix& x) {
  const SymEig eig = SymEigAscending(x);
  const Vector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.asDiagonal();
}

struct Factors {
  Matrix lc;
  Matrix lo;
};

Factors GramianFactors(const StateSpace& g) {
  if (!IsStable(g)) {
    throw Error(ErrorCode::kUnstableInput,
                "balanced truncation needs all poles in the open left "
                "half-plane");
  }
  const Matrix p = SolveLyapunov(g.a(), g.b() * g.b().transpose()).p;
  const Matrix q =
      SolveLyapunov(g.a().transpose(), g.c().transpose() * g.c()).p;
  return {SqrtFactor(p), SqrtFactor(q)};
}

}  // namespace

Vector HankelSingularValues(const StateSpace& g) {
  if (g.states() == 0) return Vector(0);
  const Factors f = GramianFactors(g);
  return Eigen::JacobiSVD<Matrix>(f.lo.transpose() * f.lc).singularValues();
}

BalancedResult BalancedTruncate(const StateSpace& g, int order) {
  const int n = g.states();
  if (order < 0 || order > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "order " + std::to_string(order) + " outside [0, " +
                    std::to_string(n) + "]");
  }
  if (n == 0) return {g, Vector(0)};

  const Factors f = GramianFactors(g);
  Eigen::JacobiSVD<Matrix> svd(f.lo.transpose() * f.lc,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector hsv = svd.singularValues();
  if (order == n) return {g, std::move(hsv)};
  if (order == 0) return {StateSpace::Static(g.d()), std::move(hsv)};

  if (!(hsv(order - 1) > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "order " + std::to_string(order) +
                    " exceeds the number of nonzero Hankel singular values");
  }
  const Vector scale = hsv.head(order).cwiseSqrt().cwiseInverse();
  const Matrix left =
      scale.asDiagonal() * svd.matrixU().leftCols(order).transpose() *
      f.lo.transpose();
  const Matrix right = f.lc * svd.matrixV().leftCols(order) *
                       scale.asDiagonal();
  return {StateSpace(left * g.a() * right, left * g.b(), g.c() * right, g.d()),
          std::move(hsv)};
}

}  // namespace mor
