#include "mor/state_space.h"

#include <algorithm>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "mor/errors.h"

namespace mor {
namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void RequireSameInputs(const StateSpace& a, const StateSpace& b,
                       const char* op) {
  if (a.inputs() != b.inputs()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": input counts differ (" +
                    std::to_string(a.inputs()) + " vs " +
                    std::to_string(b.inputs()) + ")");
  }
}

Matrix BlockDiag(const Matrix& x, const Matrix& y) {
  Matrix out = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
  out.topLeftCorner(x.rows(), x.cols()) = x;
  out.bottomRightCorner(y.rows(), y.cols()) = y;
  return out;
}

struct Triple {
  Matrix a, b, c;
};

// Orthogonal controllability staircase. Returns the controllable part, or
// nothing changed (reduced == false) when the pair is already controllable.
Triple ControllablePart(const Matrix& a, const Matrix& b, const Matrix& c,
                        double tol, bool* reduced) {
  const Eigen::Index n = a.rows();
  *reduced = false;
  if (n == 0) return {a, b, c};

  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) {
    *reduced = true;
    return {Matrix(0, 0), Matrix(0, b.cols()), Matrix(c.rows(), 0)};
  }
  const double threshold = tol * scale;

  Matrix at = a, bt = b, ct = c;
  Eigen::Index done = 0;
  Matrix coupling = bt;
  while (done < n) {
    const Eigen::Index rest = n - done;
    Eigen::JacobiSVD<Matrix> svd(coupling, Eigen::ComputeFullU);
    const Vector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > threshold) ++rank;
    if (rank == 0) break;

    const Matrix& u = svd.matrixU();
    at.bottomRows(rest) = u.transpose() * at.bottomRows(rest);
    at.rightCols(rest) = at.rightCols(rest) * u;
    bt.bottomRows(rest) = u.transpose() * bt.bottomRows(rest);
    ct.rightCols(rest) = ct.rightCols(rest) * u;

    done += rank;
    if (done == n) break;
    coupling = at.block(done, done - rank, n - done, rank);
  }

  if (done == n) return {a, b, c};
  *reduced = true;
  return {at.topLeftCorner(done, done), bt.topRows(done), ct.leftCols(done)};
}

}  // namespace

StateSpace::StateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const auto n = a_.rows();
  if (a_.cols() != n || b_.rows() != n || c_.cols() != n ||
      c_.rows() != d_.rows() || b_.cols() != d_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "inconsistent realization: A " + Shape(a_) + ", B " +
                    Shape(b_) + ", C " + Shape(c_) + ", D " + Shape(d_));
  }
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() ||
      !d_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "realization contains non-finite entries");
  }
}

StateSpace StateSpace::Static(Matrix d) {
  const auto p = d.rows();
  const auto q = d.cols();
  return StateSpace(Matrix(0, 0), Matrix(0, q), Matrix(p, 0), std::move(d));
}

CMatrix EvalAt(const StateSpace& sys, Complex s) {
  CMatrix out = sys.d().cast<Complex>();
  const int n = sys.states();
  if (n == 0) return out;

  CMatrix shifted = -sys.a().cast<Complex>();
  shifted.diagonal().array() += s;
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::kSingularAtFrequency,
                "sI - A is singular at s = (" + std::to_string(s.real()) +
                    ", " + std::to_string(s.imag()) + ")");
  }
  out.noalias() += sys.c().cast<Complex>() * lu.solve(sys.b().cast<Complex>());
  return out;
}

CMatrix EvalFreq(const StateSpace& sys, double omega) {
  return EvalAt(sys, Complex(0.0, omega));
}

double SigmaMax(const StateSpace& sys, double omega) {
  const CMatrix g = EvalFreq(sys, omega);
  if (g.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(g).singularValues()(0);
}

StateSpace Subtract(const StateSpace& g, const StateSpace& r) {
  if (g.outputs() != r.outputs() || g.inputs() != r.inputs()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "subtract: transfer shapes differ");
  }
  Matrix b(g.states() + r.states(), g.inputs());
  b << g.b(), r.b();
  Matrix c(g.outputs(), g.states() + r.states());
  c << g.c(), -r.c();
  return StateSpace(BlockDiag(g.a(), r.a()), std::move(b), std::move(c),
                    g.d() - r.d());
}

StateSpace Series(const StateSpace& left, const StateSpace& right) {
  if (left.inputs() != right.outputs()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "series: left has " + std::to_string(left.inputs()) +
                    " inputs, right has " + std::to_string(right.outputs()) +
                    " outputs");
  }
  const int nr = right.states();
  const int nl = left.states();
  Matrix a = Matrix::Zero(nr + nl, nr + nl);
  a.topLeftCorner(nr, nr) = right.a();
  a.bottomLeftCorner(nl, nr) = left.b() * right.c();
  a.bottomRightCorner(nl, nl) = left.a();
  Matrix b(nr + nl, right.inputs());
  b << right.b(), left.b() * right.d();
  Matrix c(left.outputs(), nr + nl);
  c << left.d() * right.c(), left.c();
  return StateSpace(std::move(a), std::move(b), std::move(c),
                    left.d() * right.d());
}

StateSpace VertCat(std::span<const StateSpace> blocks) {
  if (blocks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "vertcat: no blocks");
  }
  int n = 0;
  int p = 0;
  for (const auto& blk : blocks) {
    RequireSameInputs(blocks.front(), blk, "vertcat");
    n += blk.states();
    p += blk.outputs();
  }
  const int q = blocks.front().inputs();
  Matrix a = Matrix::Zero(n, n);
  Matrix b(n, q);
  Matrix c = Matrix::Zero(p, n);
  Matrix d(p, q);
  int row = 0;
  int state = 0;
  for (const auto& blk : blocks) {
    const int ni = blk.states();
    const int pi = blk.outputs();
    a.block(state, state, ni, ni) = blk.a();
    b.middleRows(state, ni) = blk.b();
    c.block(row, state, pi, ni) = blk.c();
    d.middleRows(row, pi) = blk.d();
    row += pi;
    state += ni;
  }
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

StateSpace Dual(const StateSpace& sys) {
  return StateSpace(sys.a().transpose(), sys.c().transpose(),
                    sys.b().transpose(), sys.d().transpose());
}

StateSpace MinReal(const StateSpace& sys, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "minreal: tol must be positive");
  }
  bool reduced_c = false;
  Triple ctrb = ControllablePart(sys.a(), sys.b(), sys.c(), tol, &reduced_c);

  // Observability staircase on the dual pair (A', C').
  bool reduced_o = false;
  Triple obsv = ControllablePart(ctrb.a.transpose(), ctrb.c.transpose(),
                                 ctrb.b.transpose(), tol, &reduced_o);
  if (!reduced_c && !reduced_o) return sys;
  return StateSpace(obsv.a.transpose(), obsv.c.transpose(),
                    obsv.b.transpose(), sys.d());
}

std::vector<Complex> Poles(const StateSpace& sys) {
  if (sys.states() == 0) return {};
  Eigen::EigenSolver<Matrix> es(sys.a(), /*computeEigenvectors=*/false);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

bool IsStable(const StateSpace& sys) {
  const auto poles = Poles(sys);
  return std::all_of(poles.begin(), poles.end(),
                     [](const Complex& z) { return z.real() < 0.0; });
}

}  // namespace mor
