#include "mor/norms.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "mor/errors.h"
#include "mor/numkernels.h"

namespace mor {
namespace {

constexpr double kImagAxisGuard = 1e-8;
// Hamiltonian eigenvalues with |Re| below this fraction of |H|_F are treated
// as crossings. False positives only cost extra evaluations.
constexpr double kCrossingTol = 1e-6;
constexpr int kMaxIterations = 100;

double SigmaMaxOf(const Matrix& g) {
  if (g.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(g).singularValues()(0);
}

Matrix Hamiltonian(const StateSpace& sys, double gamma) {
  const Matrix& a = sys.a();
  const Matrix& b = sys.b();
  const Matrix& c = sys.c();
  const Matrix& d = sys.d();
  const int n = sys.states();
  const double g2 = gamma * gamma;

  Matrix r = d.transpose() * d;
  r.diagonal().array() -= g2;
  Matrix s = d * d.transpose();
  s.diagonal().array() -= g2;
  const Eigen::PartialPivLU<Matrix> r_lu(r);
  const Eigen::PartialPivLU<Matrix> s_lu(s);
  const Matrix rinv_dt_c = r_lu.solve(d.transpose() * c);
  const Matrix rinv_bt = r_lu.solve(b.transpose());

  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = a - b * rinv_dt_c;
  h.topRightCorner(n, n) = -gamma * b * rinv_bt;
  h.bottomLeftCorner(n, n) = gamma * c.transpose() * s_lu.solve(c);
  h.bottomRightCorner(n, n) = -a.transpose() + c.transpose() * d * rinv_bt;
  return h;
}

// Frequencies (>= 0) where some singular value of G may cross gamma.
std::vector<double> Crossings(const StateSpace& sys, double gamma) {
  const Matrix h = Hamiltonian(sys, gamma);
  Eigen::EigenSolver<Matrix> es(h, /*computeEigenvectors=*/false);
  const double tol = kCrossingTol * std::max(1.0, h.norm());
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex z = es.eigenvalues()(i);
    if (std::abs(z.real()) <= tol && z.imag() >= 0.0) out.push_back(z.imag());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

LinfResult LinfNorm(const StateSpace& sys, double rel_tol) {
  if (!(rel_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "linf: rel_tol must be positive");
  }
  const double d_gain = SigmaMaxOf(sys.d());
  if (sys.states() == 0) return {d_gain, 0.0, 0};

  const auto poles = Poles(sys);
  const double guard = kImagAxisGuard * std::max(1.0, sys.a().norm());
  for (const Complex& z : poles) {
    if (std::abs(z.real()) <= guard) {
      throw Error(ErrorCode::kImaginaryAxisPoles,
                  "pole at " + std::to_string(z.real()) + " + " +
                      std::to_string(z.imag()) + "j");
    }
  }

  double lower = 0.0;
  double peak = 0.0;
  auto consider = [&](double omega) {
    const double gain = SigmaMax(sys, omega);
    if (gain > lower) {
      lower = gain;
      peak = omega;
    }
  };

  // Starting candidates: DC plus the most resonant poles.
  consider(0.0);
  std::vector<std::pair<double, double>> ranked;
  for (const Complex& z : poles) {
    if (z.imag() < 0.0) continue;
    const double mag = std::abs(z);
    const double resonance =
        z.imag() == 0.0 ? 0.0 : std::abs(z.imag() / z.real()) / mag;
    ranked.emplace_back(resonance, mag);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; i < std::min<std::size_t>(ranked.size(), 3); ++i) {
    consider(ranked[i].second);
  }
  if (d_gain > lower) {
    lower = d_gain;
    peak = std::numeric_limits<double>::infinity();
  }

  // A zero transfer cannot be bracketed by level sets; check structurally.
  const double scale = d_gain + sys.c().norm() * sys.b().norm() /
                                    std::max(sys.a().norm(), 1e-300);
  if (lower <= 1e-13 * scale) {
    const StateSpace minimal = MinReal(sys);
    if (minimal.states() == 0) return {d_gain, 0.0, 0};
    lower = std::max(lower, 1e-14 * scale);
  }

  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    const double gamma = (1.0 + rel_tol) * lower;
    const auto cross = Crossings(sys, gamma);
    if (cross.empty()) break;

    for (double w : cross) consider(w);
    for (std::size_t i = 0; i + 1 < cross.size(); ++i) {
      consider(0.5 * (cross[i] + cross[i + 1]));
    }
    // Only spurious crossings: nothing above gamma was found.
    if (lower < gamma) break;
  }
  return {(1.0 + rel_tol) * lower, peak, iter};
}

double H2ErrorMetric(const StateSpace& err_sys) {
  if (err_sys.d().size() > 0 && err_sys.d().cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::kNonzeroFeedthrough,
                "H2 metric needs D = 0 (max |D| = " +
                    std::to_string(err_sys.d().cwiseAbs().maxCoeff()) + ")");
  }
  if (err_sys.states() == 0) return 0.0;
  const Matrix bbt = err_sys.b() * err_sys.b().transpose();
  const GramianResult gram = SolveLyapunov(err_sys.a(), bbt);
  const double tr = (err_sys.c() * gram.p * err_sys.c().transpose()).trace();
  return std::sqrt(std::abs(tr));
}

}  // namespace mor
