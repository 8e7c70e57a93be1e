#include "mor/lowrank.h"

#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mor/errors.h"
#include "mor/sysaaa.h"
#include "test_util.h"

namespace mor {
namespace {

using testing::MaxSigma;
using testing::RandomStable;

const Complex kJ(0.0, 1.0);

CMatrix Rebuild(const LowRankPoint& pt) {
  return pt.u * pt.s.cast<Complex>().asDiagonal() * pt.v.adjoint();
}

TEST(MakeLowRankPoint, DiagonalAtZero) {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 1.0;
  const auto pt = MakeLowRankPoint(0.0, g, 1);
  EXPECT_NEAR(pt.s(0), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(pt.u(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pt.v(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pt.u(1, 0)), 0.0, 1e-15);
  const auto blk = BuildLowRankBlock(pt);
  EXPECT_EQ(blk.states(), 1);
  EXPECT_EQ(blk.a, Matrix::Zero(1, 1));
  EXPECT_EQ(blk.b1, (Matrix(1, 2) << 2, 0).finished());
  EXPECT_EQ(blk.b2, (Matrix(1, 2) << 1, 0).finished());
}

TEST(MakeLowRankPoint, FactorInvariants) {
  std::mt19937 rng(60);
  const auto g = RandomStable(rng, 6, 3, 4);
  for (double w : {0.0, 1.3}) {
    for (int r = 1; r <= 3; ++r) {
      const auto pt = MakeLowRankPoint(w, EvalFreq(g, w), r);
      EXPECT_LE((pt.u.adjoint() * pt.u - CMatrix::Identity(r, r)).norm(),
                1e-12);
      EXPECT_LE((pt.v.adjoint() * pt.v - CMatrix::Identity(r, r)).norm(),
                1e-12);
      for (int i = 0; i + 1 < r; ++i) EXPECT_GE(pt.s(i), pt.s(i + 1));
      EXPECT_GT(pt.s(r - 1), 0.0);
      if (w == 0.0) {
        EXPECT_EQ(pt.u.imag().norm(), 0.0);
        EXPECT_EQ(pt.v.imag().norm(), 0.0);
      }
      if (r == 3) {
        EXPECT_LE((Rebuild(pt) - pt.sample).norm(), 1e-12 * pt.sample.norm());
      }
    }
  }
}

TEST(BuildLowRankBlock, StateCounts) {
  std::mt19937 rng(61);
  const auto g = RandomStable(rng, 5, 2, 2);
  EXPECT_EQ(BuildLowRankBlock(MakeLowRankPoint(2.0, EvalFreq(g, 2.0), 1))
                .states(),
            2);
  EXPECT_EQ(BuildLowRankBlock(MakeLowRankPoint(2.0, EvalFreq(g, 2.0), 2))
                .states(),
            4);
  EXPECT_EQ(BuildLowRankBlock(MakeLowRankPoint(0.0, EvalFreq(g, 0.0), 1))
                .states(),
            1);
}

// (sI - A_k)^{-1} = [[sI, wI], [-wI, sI]] / (s^2 + w^2) applied by hand to
// [S V_r'; S V_i'] and [U_r'; U_i'].
TEST(BuildLowRankBlock, MatchesRationalForms) {
  std::mt19937 rng(62);
  const auto g = RandomStable(rng, 6, 2, 3);
  const double w0 = 1.7;
  const auto pt = MakeLowRankPoint(w0, EvalFreq(g, w0), 2);
  const auto blk = BuildLowRankBlock(pt);
  const Matrix svr = pt.s.asDiagonal() * pt.v.real().transpose();
  const Matrix svi = pt.s.asDiagonal() * pt.v.imag().transpose();
  const Matrix ur = pt.u.real().transpose();
  const Matrix ui = pt.u.imag().transpose();
  for (double w : {0.3, 2.2, 8.0}) {
    const Complex s = w * kJ;
    const Complex den = s * s + w0 * w0;
    CMatrix n(4, 3), m(4, 2);
    n << (s * svr + w0 * svi) / den, (-w0 * svr + s * svi) / den;
    m << (s * ur + w0 * ui) / den, (-w0 * ur + s * ui) / den;
    const StateSpace nk(blk.a, blk.b1, Matrix::Identity(4, 4),
                        Matrix::Zero(4, 3));
    const StateSpace mk(blk.a, blk.b2, Matrix::Identity(4, 4),
                        Matrix::Zero(4, 2));
    EXPECT_LE((EvalAt(nk, s) - n).norm(), 1e-13 * (1 + n.norm()));
    EXPECT_LE((EvalAt(mk, s) - m).norm(), 1e-13 * (1 + m.norm()));
  }
}

TEST(BuildLowRankBlock, DegenerateFactorsRejected) {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = 1.0;
  const auto pt = MakeLowRankPoint(0.0, g, 2);
  try {
    BuildLowRankBlock(pt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateFactors);
  }
}

// At full rank the low-rank block is the system-AAA block seen through an
// invertible change of output basis, so both give the same interpolant.
TEST(BuildLowRankBlock, FullRankSameInterpolantAsSystemBlock) {
  std::mt19937 rng(63);
  const auto g = RandomStable(rng, 8, 2, 2);
  const std::vector<double> omegas = {0.0, 1.4};
  std::vector<BlockRealization> sys_blocks, lr_blocks;
  for (double w : omegas) {
    sys_blocks.push_back(BuildBlock(MakeSupportPoint(g, w)));
    lr_blocks.push_back(BuildLowRankBlock(MakeLowRankPoint(w, EvalFreq(g, w), 2)));
  }
  const auto ws = SolveWeights(ComputeX(AssembleErrorSystem(sys_blocks, g)), 2);
  const auto wl = SolveWeights(ComputeX(AssembleErrorSystem(lr_blocks, g)), 2);
  const auto rs = RealizeInterpolant(sys_blocks, ws, g.d());
  const auto rl = RealizeInterpolant(lr_blocks, wl, g.d());
  for (double w : omegas) {
    const CMatrix gw = EvalFreq(g, w);
    EXPECT_LE(MaxSigma(EvalFreq(rl, w) - gw), 1e-8 * (1 + MaxSigma(gw)));
  }
  for (double w : {0.2, 0.9, 3.0, 11.0}) {
    const CMatrix a = EvalFreq(rs, w);
    EXPECT_LE((EvalFreq(rl, w) - a).norm(), 1e-7 * (1 + a.norm())) << w;
  }
}

LowRankPoint PointAt(double omega, int rank, int p = 2, int q = 2) {
  LowRankPoint pt;
  pt.omega = omega;
  pt.rank = rank;
  pt.u = CMatrix::Zero(p, rank);
  pt.v = CMatrix::Zero(q, rank);
  pt.s = Vector::Ones(rank);
  return pt;
}

TEST(SelectOrGrow, EmptyAddsPoint) {
  const auto a = SelectOrGrow(3.0, {}, 0.02);
  EXPECT_EQ(a.kind, RankAction::Kind::kNewPoint);
  EXPECT_EQ(a.omega, 3.0);
}

TEST(SelectOrGrow, ExactHitGrows) {
  const std::vector<LowRankPoint> pts = {PointAt(0.0, 1), PointAt(5.0, 1)};
  const auto a = SelectOrGrow(5.0, pts, 0.02);
  EXPECT_EQ(a.kind, RankAction::Kind::kGrowRank);
  EXPECT_EQ(a.index, 1);
}

TEST(SelectOrGrow, ThresholdArithmetic) {
  const std::vector<LowRankPoint> pts = {PointAt(4.0, 1)};
  const auto near = SelectOrGrow(1.005 * 4.0, pts, 0.01);
  EXPECT_EQ(near.kind, RankAction::Kind::kGrowRank);
  EXPECT_EQ(near.index, 0);
  const auto far = SelectOrGrow(1.02 * 4.0, pts, 0.01);
  EXPECT_EQ(far.kind, RankAction::Kind::kNewPoint);
  // Below 1 rad/s the radius is absolute.
  const std::vector<LowRankPoint> low = {PointAt(0.0, 1)};
  EXPECT_EQ(SelectOrGrow(0.005, low, 0.01).kind,
            RankAction::Kind::kGrowRank);
  EXPECT_EQ(SelectOrGrow(0.02, low, 0.01).kind, RankAction::Kind::kNewPoint);
}

TEST(SelectOrGrow, SaturatedWhenFullRank) {
  const std::vector<LowRankPoint> pts = {PointAt(2.0, 2)};
  try {
    SelectOrGrow(2.0, pts, 0.02);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSaturated);
  }
}

TEST(SelectOrGrow, InvalidRadius) {
  EXPECT_THROW(SelectOrGrow(1.0, {}, 0.0), Error);
}

void CheckGrowthLaw(const ReductionResult& res) {
  for (std::size_t k = 0; k < res.iterates.size(); ++k) {
    const auto& it = res.iterates[k];
    int want = 0;
    for (std::size_t i = 0; i < it.support.size(); ++i) {
      want += (it.support[i].is_zero() ? 1 : 2) * it.ranks[i];
    }
    EXPECT_EQ(it.order, want) << k;
    EXPECT_EQ(it.sys.states(), want) << k;
    if (k > 0) {
      const auto& rec = res.report.iterations[k];
      const int step = it.order - res.iterates[k - 1].order;
      EXPECT_EQ(step, rec.omega == 0.0 ? 1 : 2) << k;
    }
  }
}

TEST(ReduceLowRank, SisoMatchesSystemAaa) {
  std::mt19937 rng(64);
  for (int trial = 0; trial < 4; ++trial) {
    const auto g = RandomStable(rng, 10, 1, 1);
    ReduceOptions opts;
    opts.max_iterations = 4;
    opts.keep_best = false;
    const auto a = Reduce(g, opts);
    const auto b = ReduceLowRank(g, opts);
    const std::size_t common = std::min(a.iterates.size(), b.iterates.size());
    ASSERT_GE(common, 2u);
    for (std::size_t k = 0; k < common; ++k) {
      // The two paths build the same blocks up to rounding.
      EXPECT_NEAR(a.report.iterations[k].omega, b.report.iterations[k].omega,
                  1e-6 * (1 + a.report.iterations[k].omega));
      for (double w : {0.0, 0.5, 2.0, 9.0}) {
        const CMatrix ra = EvalFreq(a.iterates[k].sys, w);
        EXPECT_LE((EvalFreq(b.iterates[k].sys, w) - ra).norm(),
                  1e-9 * (1 + ra.norm()));
      }
    }
  }
}

TEST(ReduceLowRank, GrowthLawMimo) {
  std::mt19937 rng(65);
  const auto g = RandomStable(rng, 16, 2, 3);
  ReduceOptions opts;
  opts.max_iterations = 8;
  opts.min_dist = 0.2;
  const auto res = ReduceLowRank(g, opts);
  CheckGrowthLaw(res);
  for (std::size_t k = 1; k < res.report.iterations.size(); ++k) {
    const auto& rec = res.report.iterations[k];
    if (rec.action == "new") {
      EXPECT_EQ(rec.ranks[rec.point_index], 1);
    }
  }
}

TEST(ReduceLowRank, FullRankPointsInterpolate) {
  std::mt19937 rng(66);
  const auto g = RandomStable(rng, 12, 2, 2);
  ReduceOptions opts;
  opts.max_iterations = 10;
  opts.min_dist = 0.5;
  opts.keep_best = false;
  const auto res = ReduceLowRank(g, opts);
  bool saw_full = false;
  for (const auto& it : res.iterates) {
    for (std::size_t i = 0; i < it.support.size(); ++i) {
      if (it.ranks[i] < 2) continue;
      saw_full = true;
      const auto& pt = it.support[i];
      EXPECT_LE(MaxSigma(EvalFreq(it.sys, pt.omega) - pt.sample),
                1e-8 * (1 + MaxSigma(pt.sample)));
    }
  }
  EXPECT_TRUE(saw_full);
}

TEST(ReduceLowRank, MoreOutputsThanInputsIsDualized) {
  std::mt19937 rng(67);
  const auto g = RandomStable(rng, 10, 3, 2);
  ReduceOptions opts;
  opts.max_iterations = 3;
  opts.keep_best = false;
  const auto res = ReduceLowRank(g, opts);
  EXPECT_TRUE(res.report.dualized);
  EXPECT_EQ(res.interpolant.sys.outputs(), 3);
  EXPECT_EQ(res.interpolant.sys.inputs(), 2);
  ASSERT_FALSE(res.report.notes.empty());
  EXPECT_NE(res.report.notes.back().find("dualized"), std::string::npos);

  const auto dual = ReduceLowRank(Dual(g), opts);
  ASSERT_EQ(dual.iterates.size(), res.iterates.size());
  for (std::size_t k = 0; k < res.iterates.size(); ++k) {
    for (double w : {0.0, 1.0, 4.0}) {
      const CMatrix want = EvalFreq(dual.iterates[k].sys, w).transpose();
      EXPECT_LE((EvalFreq(res.iterates[k].sys, w) - want).norm(),
                1e-12 * (1 + want.norm()));
    }
    for (const auto& pt : res.iterates[k].support) {
      EXPECT_EQ(pt.sample.rows(), 3);
    }
  }
}

TEST(ReduceLowRank, NotDualizedWhenSquare) {
  std::mt19937 rng(68);
  const auto g = RandomStable(rng, 6, 2, 2);
  ReduceOptions opts;
  opts.max_iterations = 2;
  EXPECT_FALSE(ReduceLowRank(g, opts).report.dualized);
}

TEST(ReduceLowRank, RealCoefficients) {
  std::mt19937 rng(69);
  const auto g = RandomStable(rng, 10, 2, 2);
  ReduceOptions opts;
  opts.max_iterations = 5;
  const auto res = ReduceLowRank(g, opts);
  for (const auto& it : res.iterates) {
    for (double w : {0.3, 1.9, 7.0}) {
      const CMatrix up = EvalAt(it.sys, Complex(0, w));
      const CMatrix down = EvalAt(it.sys, Complex(0, -w));
      EXPECT_LE((down - up.conjugate()).norm(), 1e-12 * (1 + up.norm()));
    }
  }
}

}  // namespace
}  // namespace mor
