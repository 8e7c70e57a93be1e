#include "mor/lowrank.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "mor/errors.h"
#include "mor/numkernels.h"

namespace mor {
namespace {

constexpr double kDegenerateTol = 1e-14;

ReductionResult ReduceLowRankCore(const StateSpace& g,
                                  const ReduceOptions& opts) {
  const int p = g.outputs();

  ReductionResult res;
  ReductionReport& report = res.report;
  report.method = "lowrank-aaa";

  std::vector<LowRankPoint> points;
  Interpolant current{StateSpace::Static(g.d()), {}, {}, {}, 0};
  current.weights.w = Matrix::Identity(p, p);

  internal::ErrorStats stats = internal::MeasureError(g, current.sys, opts);
  {
    IterationRecord rec;
    rec.linf_error = stats.linf.gamma;
    rec.h2_metric = stats.h2;
    rec.stable = stats.stable;
    report.iterations.push_back(rec);
    res.iterates.push_back(current);
  }

  report.termination = "max-iterations";
  const int max_iter = internal::MaxIterations(opts);
  for (int it = 1; it <= max_iter; ++it) {
    if (stats.linf.gamma == 0.0) {
      report.termination = "exact";
      break;
    }
    if (opts.target_linf && stats.linf.gamma <= *opts.target_linf) {
      report.termination = "target-linf";
      break;
    }
    if (stats.linf.peak_at_infinity()) {
      report.termination = "peak-at-infinity";
      report.notes.push_back(
          "error peak at omega = inf; feedthrough already interpolated");
      break;
    }
    const double candidate = internal::SnapToZero(stats.linf.omega_peak);

    RankAction action;
    try {
      action = SelectOrGrow(candidate, points, opts.min_dist);
    } catch (const Error& e) {
      report.termination = "saturated";
      report.notes.push_back(e.what());
      break;
    }
    const bool zero = action.kind == RankAction::Kind::kGrowRank
                          ? points[action.index].is_zero()
                          : action.omega == 0.0;
    if (opts.target_order && current.order + (zero ? 1 : 2) >
                                 *opts.target_order) {
      report.termination = "target-order";
      break;
    }

    std::vector<LowRankPoint> next_points = points;
    Interpolant next;
    std::vector<BlockRealization> blocks;
    try {
      if (action.kind == RankAction::Kind::kGrowRank) {
        LowRankPoint& pt = next_points[action.index];
        pt = MakeLowRankPoint(pt.omega, pt.sample, pt.rank + 1);
      } else {
        next_points.push_back(
            MakeLowRankPoint(action.omega, EvalFreq(g, action.omega), 1));
      }
      for (const auto& pt : next_points) {
        blocks.push_back(BuildLowRankBlock(pt));
      }
      internal::Fit fit = internal::FitInterpolant(g, blocks, opts);
      next.sys = std::move(fit.sys);
      next.weights = std::move(fit.weights);
    } catch (const Error& e) {
      report.termination = "error: " + std::string(ToString(e.code()));
      report.notes.push_back(e.what());
      break;
    }
    for (const auto& pt : next_points) {
      next.support.push_back({pt.omega, pt.sample});
      next.ranks.push_back(pt.rank);
    }
    next.order = next.sys.states();

    IterationRecord rec;
    rec.iteration = it;
    rec.action =
        action.kind == RankAction::Kind::kGrowRank ? "grow" : "new";
    rec.point_index = action.kind == RankAction::Kind::kGrowRank
                          ? action.index
                          : static_cast<int>(next_points.size()) - 1;
    rec.omega = next_points[rec.point_index].omega;
    rec.order = next.order;
    rec.ranks = next.ranks;
    rec.w0_condition = next.weights.w0_condition;
    rec.degenerate_spectrum = next.weights.degenerate;
    const auto wk = BlockWeightConditions(blocks, next.weights, next.support);
    rec.wk_condition = *std::max_element(wk.begin(), wk.end());

    bool measured = true;
    try {
      stats = internal::MeasureError(g, next.sys, opts);
      rec.linf_error = stats.linf.gamma;
      rec.h2_metric = stats.h2;
    } catch (const Error& e) {
      rec.linf_error = std::numeric_limits<double>::quiet_NaN();
      rec.h2_metric = std::numeric_limits<double>::quiet_NaN();
      report.termination = "error: " + std::string(ToString(e.code()));
      report.notes.push_back(e.what());
      measured = false;
    }
    rec.stable = IsStable(next.sys);
    report.iterations.push_back(rec);
    res.iterates.push_back(next);
    points = std::move(next_points);
    current = std::move(next);
    if (!measured) break;
  }

  report.returned_iteration =
      internal::PickReturned(report.iterations, opts.keep_best);
  res.interpolant = res.iterates[report.returned_iteration];
  return res;
}

}  // namespace

LowRankPoint MakeLowRankPoint(double omega, CMatrix sample, int rank) {
  LowRankPoint pt;
  pt.omega = omega;
  pt.rank = rank;
  if (omega == 0.0) sample.imag().setZero();
  pt.sample = std::move(sample);

  TruncatedSvd svd;
  if (omega == 0.0) {
    const int full =
        static_cast<int>(std::min(pt.sample.rows(), pt.sample.cols()));
    if (rank < 1 || rank > full) {
      throw Error(ErrorCode::kRankOutOfRange,
                  "rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(full) + "]");
    }
    Eigen::JacobiSVD<Matrix> real_svd(
        pt.sample.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.u = real_svd.matrixU().leftCols(rank).cast<Complex>();
    svd.s = real_svd.singularValues().head(rank);
    svd.v = real_svd.matrixV().leftCols(rank).cast<Complex>();
  } else {
    svd = SvdTruncate(pt.sample, rank);
  }
  for (int j = 0; j < rank; ++j) {
    Eigen::Index at = 0;
    svd.u.col(j).cwiseAbs().maxCoeff(&at);
    const Complex z = svd.u(at, j);
    if (std::abs(z) == 0.0) continue;
    const Complex phase = std::conj(z) / std::abs(z);
    svd.u.col(j) *= phase;
    svd.v.col(j) *= phase;
  }
  pt.u = std::move(svd.u);
  pt.s = std::move(svd.s);
  pt.v = std::move(svd.v);
  return pt;
}

BlockRealization BuildLowRankBlock(const LowRankPoint& point) {
  const int r = point.rank;
  const auto p = point.u.rows();
  const auto q = point.v.rows();
  if (point.s.size() != r || point.u.cols() != r || point.v.cols() != r) {
    throw Error(ErrorCode::kDimensionMismatch, "low-rank factors disagree");
  }
  if (!(point.s(r - 1) > kDegenerateTol * std::max(point.s(0), 1e-300))) {
    throw Error(ErrorCode::kDegenerateFactors,
                "retained singular value " + std::to_string(point.s(r - 1)) +
                    " is numerically zero");
  }

  const Matrix svr = point.s.asDiagonal() * point.v.real().transpose();
  const Matrix svi = point.s.asDiagonal() * point.v.imag().transpose();
  if (point.is_zero()) {
    return {Matrix::Zero(r, r), svr, point.u.real().transpose()};
  }

  const double w = point.omega;
  BlockRealization blk;
  blk.a = Matrix::Zero(2 * r, 2 * r);
  blk.a.topRightCorner(r, r).diagonal().setConstant(w);
  blk.a.bottomLeftCorner(r, r).diagonal().setConstant(-w);
  blk.b1.resize(2 * r, q);
  blk.b1 << svr, svi;
  blk.b2.resize(2 * r, p);
  blk.b2 << point.u.real().transpose(), point.u.imag().transpose();
  return blk;
}

RankAction SelectOrGrow(double candidate, std::span<const LowRankPoint> points,
                        double min_dist) {
  if (!(min_dist > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_dist must be positive");
  }
  int nearest = -1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dist = std::abs(candidate - points[i].omega);
    if (dist < best) {
      best = dist;
      nearest = static_cast<int>(i);
    }
  }
  if (nearest < 0) return {RankAction::Kind::kNewPoint, candidate, -1};

  const LowRankPoint& pt = points[nearest];
  if (best >= min_dist * std::max(1.0, pt.omega)) {
    return {RankAction::Kind::kNewPoint, candidate, -1};
  }
  const int full = static_cast<int>(std::min(pt.u.rows(), pt.v.rows()));
  if (pt.rank >= full) {
    throw Error(ErrorCode::kSaturated,
                "support point at omega = " + std::to_string(pt.omega) +
                    " already has full rank " + std::to_string(full));
  }
  return {RankAction::Kind::kGrowRank, pt.omega, nearest};
}

ReductionResult ReduceLowRank(const StateSpace& g, const ReduceOptions& opts) {
  if (g.outputs() <= g.inputs()) return ReduceLowRankCore(g, opts);

  ReductionResult res = ReduceLowRankCore(Dual(g), opts);
  for (auto& it : res.iterates) {
    it.sys = Dual(it.sys);
    for (auto& s : it.support) s.sample.transposeInPlace();
  }
  res.interpolant = res.iterates[res.report.returned_iteration];
  res.report.dualized = true;
  res.report.notes.push_back(
      "dualized: more outputs than inputs, reduced (A', C', B', D') and "
      "transposed back");
  return res;
}

}  // namespace mor
