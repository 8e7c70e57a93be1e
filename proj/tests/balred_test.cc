#include "mor/balred.h"

#include <algorithm>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "mor/errors.h"
#include "mor/norms.h"
#include "test_util.h"

namespace mor {
namespace {

using testing::RandomStable;

TEST(BalancedTruncate, FullOrderKeepsTransfer) {
  std::mt19937 rng(70);
  const auto g = RandomStable(rng, 8, 2, 2);
  const auto r = BalancedTruncate(g, 8);
  for (double w : {0.0, 0.4, 3.0, 50.0}) {
    const CMatrix gw = EvalFreq(g, w);
    EXPECT_LE((EvalFreq(r.sys, w) - gw).norm(), 1e-9 * (1 + gw.norm()));
  }
}

TEST(BalancedTruncate, FirstOrderHankelValue) {
  const StateSpace g(Matrix::Constant(1, 1, -1.0), Matrix::Ones(1, 1),
                     Matrix::Ones(1, 1), Matrix::Zero(1, 1));
  const Vector hsv = HankelSingularValues(g);
  ASSERT_EQ(hsv.size(), 1);
  EXPECT_NEAR(hsv(0), 0.5, 1e-14);
  EXPECT_NEAR(BalancedTruncate(g, 1).hsv(0), 0.5, 1e-14);
}

TEST(BalancedTruncate, ZeroOrderIsFeedthrough) {
  std::mt19937 rng(71);
  const auto g = RandomStable(rng, 5, 2, 3);
  const auto r = BalancedTruncate(g, 0);
  EXPECT_EQ(r.sys.states(), 0);
  EXPECT_EQ(r.sys.d(), g.d());
}

TEST(BalancedTruncate, Errors) {
  std::mt19937 rng(72);
  const auto g = RandomStable(rng, 4, 1, 1);
  EXPECT_THROW(BalancedTruncate(g, 5), Error);
  EXPECT_THROW(BalancedTruncate(g, -1), Error);
  const StateSpace unstable(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1),
                            Matrix::Ones(1, 1), Matrix::Zero(1, 1));
  try {
    BalancedTruncate(unstable, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnstableInput);
  }
}

// Oracle: sqrt(eig(P Q)) straight from the Lyapunov equations in Kronecker
// form, no Schur solver involved.
Vector KroneckerHsv(const StateSpace& g) {
  const int n = g.states();
  const Matrix eye = Matrix::Identity(n, n);
  // vec(A P + P A') = (I kron A + A kron I) vec(P), column-major vec.
  const auto solve = [&](const Matrix& a, const Matrix& q) {
    Matrix k(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        k.block(i * n, j * n, n, n) =
            a(i, j) * eye + (i == j ? a : Matrix::Zero(n, n));
    const Vector rhs = -Eigen::Map<const Vector>(q.data(), n * n);
    const Vector x = k.fullPivLu().solve(rhs);
    return Matrix(Eigen::Map<const Matrix>(x.data(), n, n));
  };
  const Matrix p = solve(g.a(), g.b() * g.b().transpose());
  const Matrix q = solve(g.a().transpose(), g.c().transpose() * g.c());
  Eigen::EigenSolver<Matrix> es(p * q);
  Vector ev = es.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
  std::sort(ev.data(), ev.data() + n, std::greater<double>());
  return ev;
}

TEST(HankelSingularValues, MatchKroneckerOracle) {
  std::mt19937 rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = RandomStable(rng, 6, 2, 2);
    const Vector hsv = HankelSingularValues(g);
    const Vector oracle = KroneckerHsv(g);
    EXPECT_LE((hsv - oracle).norm(), 1e-8 * oracle(0));
    for (int i = 0; i + 1 < hsv.size(); ++i) EXPECT_GE(hsv(i), hsv(i + 1));
    EXPECT_GE(hsv(hsv.size() - 1), 0.0);
  }
}

TEST(HankelSingularValues, SimilarityInvariant) {
  std::mt19937 rng(74);
  const auto g = RandomStable(rng, 7, 2, 2);
  const Matrix t =
      testing::RandomMatrix(rng, 7, 7) + 4 * Matrix::Identity(7, 7);
  const Matrix ti = t.inverse();
  const StateSpace h(t * g.a() * ti, t * g.b(), g.c() * ti, g.d());
  const Vector a = HankelSingularValues(g);
  const Vector b = HankelSingularValues(h);
  EXPECT_LE((a - b).norm(), 1e-8 * a(0));
}

TEST(BalancedTruncate, TwiceTheTailBoundAndStability) {
  std::mt19937 rng(75);
  for (int trial = 0; trial < 3; ++trial) {
    const auto g = RandomStable(rng, 30, 2, 2);
    const Vector hsv = HankelSingularValues(g);
    for (int k = 1; k < 30; k += 4) {
      const auto r = BalancedTruncate(g, k);
      EXPECT_EQ(r.sys.states(), k);
      EXPECT_TRUE(IsStable(r.sys));
      EXPECT_EQ(r.sys.d(), g.d());
      const double bound = 2.0 * hsv.tail(30 - k).sum();
      EXPECT_LE(LinfNorm(Subtract(g, r.sys)).gamma, bound + 1e-6) << k;
    }
  }
}

// The leading diagonal blocks of the balanced Lyapunov equations are
// themselves Lyapunov equations, so truncation keeps the leading values.
TEST(BalancedTruncate, TruncationKeepsLeadingHankelValues) {
  std::mt19937 rng(76);
  const auto g = RandomStable(rng, 10, 1, 2);
  const auto r = BalancedTruncate(g, 5);
  const Vector hsv = HankelSingularValues(r.sys);
  EXPECT_LE((hsv - r.hsv.head(5)).norm(), 1e-8 * r.hsv(0));
}

}  // namespace
}  // namespace mor
