#include "mor/numkernels.h"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "mor/errors.h"

namespace mor {
namespace {

// Sums lambda_i + lambda_j this close to zero, relative to |A|_F, make the
// Lyapunov operator singular for our purposes.
constexpr double kLyapunovSingularTol = 1e-11;

// Start index and size of each diagonal block of a quasi-triangular matrix.
std::vector<std::pair<Eigen::Index, Eigen::Index>> DiagonalBlocks(
    const Matrix& t) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  const Eigen::Index n = t.rows();
  for (Eigen::Index i = 0; i < n;) {
    const bool two = i + 1 < n && t(i + 1, i) != 0.0;
    blocks.emplace_back(i, two ? 2 : 1);
    i += two ? 2 : 1;
  }
  return blocks;
}

}  // namespace

GramianResult SolveLyapunov(const Matrix& a, const Matrix& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lyapunov: A and Q must be square of equal size");
  }
  if (n == 0) return {Matrix(0, 0), 0.0};

  const double scale = a.norm();
  if (scale == 0.0) {
    throw Error(ErrorCode::kIllPosedLyapunov, "A is zero");
  }

  Eigen::RealSchur<Matrix> schur(a);
  const Matrix& t = schur.matrixT();
  const Matrix& u = schur.matrixU();

  // T Y + Y T' = F with F = -U' Q U; Y is filled block by block starting
  // from the bottom-right corner.
  const Matrix f = -(u.transpose() * q * u);
  Matrix y = Matrix::Zero(n, n);
  const auto blocks = DiagonalBlocks(t);
  const double singular = kLyapunovSingularTol * scale;

  for (auto bi = blocks.rbegin(); bi != blocks.rend(); ++bi) {
    const auto [i0, ni] = *bi;
    const Eigen::Index iend = i0 + ni;
    for (auto bj = blocks.rbegin(); bj != blocks.rend(); ++bj) {
      const auto [j0, nj] = *bj;
      const Eigen::Index jend = j0 + nj;
      Matrix rhs = f.block(i0, j0, ni, nj);
      if (iend < n) {
        rhs.noalias() -= t.block(i0, iend, ni, n - iend) *
                         y.block(iend, j0, n - iend, nj);
      }
      if (jend < n) {
        rhs.noalias() -= y.block(i0, jend, ni, n - jend) *
                         t.block(j0, jend, nj, n - jend).transpose();
      }

      // vec(T_ii Y + Y T_jj') = (I (x) T_ii + T_jj (x) I) vec(Y)
      const Eigen::Index m = ni * nj;
      Matrix kron = Matrix::Zero(m, m);
      for (Eigen::Index c = 0; c < nj; ++c) {
        kron.block(c * ni, c * ni, ni, ni) += t.block(i0, i0, ni, ni);
        for (Eigen::Index r = 0; r < nj; ++r) {
          kron.block(r * ni, c * ni, ni, ni).diagonal().array() +=
              t(j0 + r, j0 + c);
        }
      }
      Eigen::JacobiSVD<Matrix> check(kron);
      if (check.singularValues()(m - 1) <= singular) {
        throw Error(ErrorCode::kIllPosedLyapunov,
                    "eigenvalues of A sum to ~0 (near-imaginary-axis or "
                    "mirrored pair)");
      }
      Vector sol = Eigen::FullPivLU<Matrix>(kron).solve(
          Eigen::Map<const Vector>(rhs.data(), m));
      y.block(i0, j0, ni, nj) = Eigen::Map<const Matrix>(sol.data(), ni, nj);
    }
  }

  Matrix p = u * y * u.transpose();
  p = 0.5 * (p + p.transpose()).eval();
  const double denom =
      std::max(q.norm(), std::numeric_limits<double>::epsilon());
  const double residual = (a * p + p * a.transpose() + q).norm() / denom;
  return {std::move(p), residual};
}

SymEig SymEigAscending(const Matrix& x) {
  if (x.rows() != x.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sym_eig: X must be square");
  }
  if (x.rows() == 0) return {Vector(0), Matrix(0, 0)};
  const Matrix sym = 0.5 * (x + x.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

TruncatedSvd SvdTruncate(const CMatrix& m, int rank) {
  const int full = static_cast<int>(std::min(m.rows(), m.cols()));
  if (rank < 1 || rank > full) {
    throw Error(ErrorCode::kRankOutOfRange,
                "rank " + std::to_string(rank) + " outside [1, " +
                    std::to_string(full) + "]");
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU().leftCols(rank), svd.singularValues().head(rank),
          svd.matrixV().leftCols(rank)};
}

}  // namespace mor
