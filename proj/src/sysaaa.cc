#include "mor/sysaaa.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "mor/errors.h"
#include "mor/numkernels.h"

namespace mor {
namespace {

constexpr double kRealSampleTol = 1e-10;
constexpr double kAxisPoleTol = 1e-8;
constexpr double kCancelTol = 1e-8;
constexpr double kDupRelTol = 1e-6;
constexpr double kDupAbsTol = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Condition(const CMatrix& m) {
  const Vector sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

int TotalStates(std::span<const BlockRealization> blocks) {
  int n = 0;
  for (const auto& blk : blocks) n += blk.states();
  return n;
}

}  // namespace

SupportPoint MakeSupportPoint(const StateSpace& g, double omega) {
  return {omega, EvalFreq(g, omega)};
}

BlockRealization BuildBlock(const SupportPoint& point) {
  const CMatrix& gk = point.sample;
  const auto p = gk.rows();
  const auto q = gk.cols();
  const Matrix re = gk.real();
  const Matrix im = gk.imag();
  if (point.is_zero()) {
    if (im.norm() > kRealSampleTol * (1.0 + re.norm())) {
      throw Error(ErrorCode::kNonRealSampleAtZero,
                  "G(0) has imaginary part of norm " +
                      std::to_string(im.norm()));
    }
    return {Matrix::Zero(p, p), re, Matrix::Identity(p, p)};
  }

  const double w = point.omega;
  BlockRealization blk;
  blk.a = Matrix::Zero(2 * p, 2 * p);
  blk.a.topRightCorner(p, p).diagonal().setConstant(w);
  blk.a.bottomLeftCorner(p, p).diagonal().setConstant(-w);
  blk.b1.resize(2 * p, q);
  blk.b1 << re, -im;
  blk.b2 = Matrix::Zero(2 * p, p);
  blk.b2.topRows(p).setIdentity();
  return blk;
}

StateSpace StackBlocks(std::span<const BlockRealization> blocks,
                       const Matrix& d) {
  const auto p = d.rows();
  const auto q = d.cols();
  const int n = TotalStates(blocks);

  Matrix a = Matrix::Zero(n, n);
  Matrix b(n, q + p);
  int off = 0;
  for (const auto& blk : blocks) {
    const int dk = blk.states();
    if (blk.b1.cols() != q || blk.b2.cols() != p) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "block input widths do not match D");
    }
    a.block(off, off, dk, dk) = blk.a;
    b.block(off, 0, dk, q) = blk.b1;
    b.block(off, q, dk, p) = blk.b2;
    off += dk;
  }
  Matrix c = Matrix::Zero(p + n, n);
  c.bottomRows(n).setIdentity();
  Matrix dd = Matrix::Zero(p + n, q + p);
  dd.topLeftCorner(p, q) = d;
  dd.block(0, q, p, p).setIdentity();
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(dd));
}

StateSpace AssembleErrorSystem(std::span<const BlockRealization> blocks,
                               const StateSpace& g, double minreal_tol) {
  const int n = g.states();
  const int p = g.outputs();
  const int m = p + TotalStates(blocks);

  // In [N M][I; -G] every block state x_k obeys
  //   x_k' = A_k x_k + (B_k1 - B_k2 D) u - B_k2 C x_G.
  // With A_k X_k - X_k A = B_k2 C the coordinates x_k - X_k x_G are driven
  // by B_k1 - B_k2 D - X_k B, which the interpolation conditions make zero:
  // the +-j omega_k modes are uncontrollable and drop out, leaving
  //   H = [A | B; [-C; X_1; ...] | 0].
  // Solving for X_k directly is exact where a numerical staircase struggles,
  // namely when omega_k sits on a lightly damped resonance of G.
  Matrix c_h = Matrix::Zero(m, n);
  c_h.topRows(p) = -g.c();
  int row = p;
  for (const auto& blk : blocks) {
    const int dk = blk.states();
    if (blk.b1.cols() != g.inputs() || blk.b2.cols() != p) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "support block widths do not match the model");
    }
    Matrix x(dk, n);
    if (n > 0) {
      const Matrix b2c = blk.b2 * g.c();
      if (blk.a.isZero(0.0)) {
        // -X A = B2 C
        x = -g.a().transpose().partialPivLu().solve(b2c.transpose())
                 .transpose();
      } else {
        // A_k = [[0, wI], [-wI, 0]]: Z = X_top - j X_bottom satisfies
        // Z (jw I - A) = (B2_top - j B2_bottom) C.
        const int half = dk / 2;
        const double w = blk.a(0, half);
        const CMatrix rhs = b2c.topRows(half).cast<Complex>() -
                            Complex(0.0, 1.0) *
                                b2c.bottomRows(half).cast<Complex>();
        const CMatrix shifted =
            Complex(0.0, w) * CMatrix::Identity(n, n) - g.a().cast<Complex>();
        const CMatrix z = shifted.transpose()
                              .partialPivLu()
                              .solve(rhs.transpose())
                              .transpose();
        x.topRows(half) = z.real();
        x.bottomRows(half) = -z.imag();
      }
      if (!x.allFinite()) {
        throw Error(ErrorCode::kResidualImaginaryPoles,
                    "support frequency coincides with a pole of G");
      }
    } else {
      x.resize(dk, 0);
    }
    const Matrix drive = blk.b1 - blk.b2 * g.d() - x * g.b();
    const double scale = 1.0 + blk.b1.norm() + (x * g.b()).norm();
    if (drive.norm() > kCancelTol * scale) {
      throw Error(ErrorCode::kResidualImaginaryPoles,
                  "support block modes stay controllable (residual " +
                      std::to_string(drive.norm() / scale) +
                      "); interpolation condition violated");
    }
    c_h.middleRows(row, dk) = x;
    row += dk;
  }

  StateSpace h = MinReal(
      StateSpace(g.a(), g.b(), std::move(c_h), Matrix::Zero(m, g.inputs())),
      minreal_tol);

  const double guard = kAxisPoleTol * std::max(1.0, h.a().norm());
  for (const Complex& z : Poles(h)) {
    if (std::abs(z.real()) <= guard) {
      throw Error(ErrorCode::kResidualImaginaryPoles,
                  "error system keeps pole " + std::to_string(z.real()) +
                      " + " + std::to_string(z.imag()) + "j");
    }
  }
  return h;
}

Matrix ComputeX(const StateSpace& h) {
  if (h.states() == 0) return Matrix::Zero(h.outputs(), h.outputs());
  const GramianResult gram =
      SolveLyapunov(h.a(), h.b() * h.b().transpose());
  const Matrix x = h.c() * gram.p * h.c().transpose();
  return 0.5 * (x + x.transpose());
}

WeightMatrix SolveWeights(const Matrix& x, int p) {
  if (p < 1 || x.rows() < p) {
    throw Error(ErrorCode::kInsufficientSpectrum,
                "X is " + std::to_string(x.rows()) + "x" +
                    std::to_string(x.cols()) + ", need " + std::to_string(p) +
                    " eigenvectors");
  }
  const SymEig eig = SymEigAscending(x);
  const double top = std::max(eig.values.maxCoeff(), 0.0);

  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > kZeroEigTol * top) nonzero.push_back(i);
  }
  if (static_cast<int>(nonzero.size()) < p) {
    throw Error(ErrorCode::kInsufficientSpectrum,
                "X has " + std::to_string(nonzero.size()) +
                    " nonzero eigenvalues, need " + std::to_string(p));
  }

  std::vector<Eigen::Index> chosen;
  for (Eigen::Index i : nonzero) {
    if (static_cast<int>(chosen.size()) == p) break;
    if (chosen.empty() ||
        eig.values(i) - eig.values(chosen.back()) > kEigGapTol * top) {
      chosen.push_back(i);
    }
  }
  WeightMatrix out;
  if (static_cast<int>(chosen.size()) < p) {
    chosen.assign(nonzero.begin(), nonzero.begin() + p);
    out.degenerate = true;
  }

  out.w.resize(p, x.rows());
  out.selected_eigenvalues.resize(p);
  for (int r = 0; r < p; ++r) {
    out.w.row(r) = eig.vectors.col(chosen[r]).transpose();
    out.selected_eigenvalues(r) = eig.values(chosen[r]);
  }
  out.w0_condition = Condition(out.w.leftCols(p).cast<Complex>());
  return out;
}

StateSpace RealizeInterpolant(std::span<const BlockRealization> blocks,
                              const WeightMatrix& w, const Matrix& d,
                              double condition_cap) {
  const auto p = d.rows();
  const int n = TotalStates(blocks);
  if (w.w.rows() != p || w.w.cols() != p + n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights are " + std::to_string(w.w.rows()) + "x" +
                    std::to_string(w.w.cols()) + ", expected " +
                    std::to_string(p) + "x" + std::to_string(p + n));
  }
  if (n == 0) return StateSpace::Static(d);

  const Matrix w0 = w.w.leftCols(p);
  const double cond = Condition(w0.cast<Complex>());
  if (!(cond <= condition_cap)) {
    throw Error(ErrorCode::kSingularW0,
                "cond(W_0) = " + std::to_string(cond));
  }
  const Matrix what = Eigen::PartialPivLU<Matrix>(w0).solve(
      Matrix(w.w.rightCols(n)));

  const StateSpace nm = StackBlocks(blocks, d);
  const Matrix b1 = nm.b().leftCols(d.cols());
  const Matrix b2 = nm.b().rightCols(p);
  return StateSpace(nm.a() - b2 * what, b2 * d - b1, -what, d);
}

std::vector<double> BlockWeightConditions(
    std::span<const BlockRealization> blocks, const WeightMatrix& w,
    std::span<const SupportPoint> support) {
  std::vector<double> out;
  const auto p = w.w.rows();
  Eigen::Index off = p;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int dk = blocks[k].states();
    const Matrix wk = w.w.middleCols(off, dk);
    if (support[k].is_zero()) {
      out.push_back(Condition(wk.cast<Complex>()));
    } else {
      const int r = dk / 2;
      CMatrix complex_wk(p, r);
      complex_wk.real() = 0.5 * wk.leftCols(r);
      complex_wk.imag() = 0.5 * wk.rightCols(r);
      out.push_back(Condition(complex_wk));
    }
    off += dk;
  }
  return out;
}

namespace internal {

Fit FitInterpolant(const StateSpace& g,
                   std::span<const BlockRealization> blocks,
                   const ReduceOptions& opts) {
  const StateSpace h = AssembleErrorSystem(blocks, g, opts.minreal_tol);
  WeightMatrix w = SolveWeights(ComputeX(h), g.outputs());
  StateSpace r = RealizeInterpolant(blocks, w, g.d(), opts.w0_condition_cap);
  return {std::move(r), std::move(w)};
}

ErrorStats MeasureError(const StateSpace& g, const StateSpace& r,
                        const ReduceOptions& opts) {
  const StateSpace err = Subtract(g, r);
  ErrorStats out;
  out.linf = LinfNorm(err, opts.bisect_tol);
  try {
    out.h2 = H2ErrorMetric(err);
  } catch (const Error&) {
    out.h2 = kNaN;
  }
  out.stable = IsStable(r);
  return out;
}

int MaxIterations(const ReduceOptions& opts) {
  if (opts.max_iterations) return *opts.max_iterations;
  if (opts.target_linf || opts.target_order) return 1000;
  return 10;
}

bool IsDuplicate(double omega, double existing) {
  const double tol =
      std::max(kDupRelTol * std::max(omega, existing), kDupAbsTol);
  return std::abs(omega - existing) <= tol;
}

double SnapToZero(double omega) { return omega < kDupAbsTol ? 0.0 : omega; }

int PickReturned(const std::vector<IterationRecord>& records, bool keep_best) {
  if (records.empty()) return 0;
  if (!keep_best) return static_cast<int>(records.size()) - 1;
  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double e = records[i].linf_error;
    if (std::isfinite(e) && e < best_err) {
      best_err = e;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace internal

ReductionResult Reduce(const StateSpace& g, const ReduceOptions& opts) {
  using internal::ErrorStats;
  const int p = g.outputs();

  ReductionResult res;
  ReductionReport& report = res.report;
  report.method = "sys-aaa";

  std::vector<BlockRealization> blocks;
  Interpolant current{StateSpace::Static(g.d()), {}, {}, {}, 0};
  current.weights.w = Matrix::Identity(p, p);

  ErrorStats stats = internal::MeasureError(g, current.sys, opts);
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
      // D is matched exactly, so this only happens through round-off.
      report.termination = "peak-at-infinity";
      report.notes.push_back(
          "error peak at omega = inf; feedthrough already interpolated");
      break;
    }
    const double omega = internal::SnapToZero(stats.linf.omega_peak);
    const bool dup = std::any_of(
        current.support.begin(), current.support.end(),
        [&](const SupportPoint& s) {
          return internal::IsDuplicate(omega, s.omega);
        });
    if (dup) {
      report.termination = "duplicate-support-point";
      report.notes.push_back("peak at existing support point omega = " +
                             std::to_string(omega));
      break;
    }
    const int grow = omega == 0.0 ? p : 2 * p;
    if (opts.target_order && current.order + grow > *opts.target_order) {
      report.termination = "target-order";
      break;
    }

    Interpolant next;
    IterationRecord rec;
    try {
      SupportPoint point = MakeSupportPoint(g, omega);
      blocks.push_back(BuildBlock(point));
      next.support = current.support;
      next.support.push_back(std::move(point));
      internal::Fit fit = internal::FitInterpolant(g, blocks, opts);
      next.sys = std::move(fit.sys);
      next.weights = std::move(fit.weights);
    } catch (const Error& e) {
      report.termination = "error: " + std::string(ToString(e.code()));
      report.notes.push_back(e.what());
      break;
    }
    next.ranks = current.ranks;
    next.ranks.push_back(p);
    next.order = next.sys.states();

    rec.iteration = it;
    rec.action = "new";
    rec.omega = omega;
    rec.point_index = static_cast<int>(next.support.size()) - 1;
    rec.order = next.order;
    rec.ranks = next.ranks;
    rec.w0_condition = next.weights.w0_condition;
    rec.degenerate_spectrum = next.weights.degenerate;
    const auto wk =
        BlockWeightConditions(blocks, next.weights, next.support);
    rec.wk_condition = *std::max_element(wk.begin(), wk.end());

    bool measured = true;
    try {
      stats = internal::MeasureError(g, next.sys, opts);
      rec.linf_error = stats.linf.gamma;
      rec.h2_metric = stats.h2;
    } catch (const Error& e) {
      rec.linf_error = kNaN;
      rec.h2_metric = kNaN;
      report.termination = "error: " + std::string(ToString(e.code()));
      report.notes.push_back(e.what());
      measured = false;
    }
    rec.stable = IsStable(next.sys);
    report.iterations.push_back(rec);
    res.iterates.push_back(next);
    current = std::move(next);
    if (!measured) break;
  }

  report.returned_iteration =
      internal::PickReturned(report.iterations, opts.keep_best);
  res.interpolant = res.iterates[report.returned_iteration];
  return res;
}

}  // namespace mor
