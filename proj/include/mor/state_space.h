#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Real continuous-time LTI realization
///
///   x' = A x + B u,   y = C x + D u,   G(s) = C (sI - A)^{-1} B + D.
///
/// A has n rows, B has q columns (inputs), C has p rows (outputs). n = 0 is a
/// static gain and is fully supported by every operation. Instances are
/// immutable once built; the constructor rejects inconsistent shapes and
/// non-finite entries.
class StateSpace {
 public:
  /// The empty 0x0 static system.
  StateSpace() = default;

  StateSpace(Matrix a, Matrix b, Matrix c, Matrix d);

  static StateSpace Static(Matrix d);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& d() const { return d_; }

  int states() const { return static_cast<int>(a_.rows()); }
  int inputs() const { return static_cast<int>(d_.cols()); }
  int outputs() const { return static_cast<int>(d_.rows()); }

 private:
  Matrix a_{0, 0};
  Matrix b_{0, 0};
  Matrix c_{0, 0};
  Matrix d_{0, 0};
};

/// G(s) at an arbitrary complex point via one LU solve of (sI - A).
/// Throws kSingularAtFrequency when sI - A is numerically singular.
CMatrix EvalAt(const StateSpace& sys, Complex s);

/// G(j omega).
CMatrix EvalFreq(const StateSpace& sys, double omega);

/// Largest singular value of G(j omega).
double SigmaMax(const StateSpace& sys, double omega);

/// Realization of G(s) - R(s).
StateSpace Subtract(const StateSpace& g, const StateSpace& r);

/// Cascade realization of left(s) * right(s); `right` acts on the input first.
StateSpace Series(const StateSpace& left, const StateSpace& right);

/// Output stacking of systems sharing one input vector.
StateSpace VertCat(std::span<const StateSpace> blocks);

/// (A', C', B', D'); transposes the transfer matrix.
StateSpace Dual(const StateSpace& sys);

inline constexpr double kDefaultMinRealTol = 1e-9;

/// Removes uncontrollable and then unobservable modes with an orthogonal
/// staircase reduction. Singular values of the staircase coupling blocks at or
/// below tol * max(|A|_F, |B|_F) (|C|_F for the observability pass) count as
/// zero. Returns the input untouched when nothing can be removed, which makes
/// the operation idempotent.
StateSpace MinReal(const StateSpace& sys, double tol = kDefaultMinRealTol);

std::vector<Complex> Poles(const StateSpace& sys);

/// True iff every pole has strictly negative real part (vacuously for n = 0).
bool IsStable(const StateSpace& sys);

}  // namespace mor
