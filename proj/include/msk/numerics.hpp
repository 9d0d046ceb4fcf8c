#pragma once

#include <span>
#include <utility>

#include "msk/error.hpp"
#include "msk/types.hpp"

namespace msk {

/// Tolerances and step sizes shared by every module. Threaded explicitly
/// through the API; reports echo it verbatim.
struct NumericsConfig {
  double fd_step = 1e-5;         // relative step for first-order central differences
  double fd_step_second = 1e-4;  // relative step for second-order stencils
  bool richardson = false;
  int newton_max_iter = 50;
  double newton_tol = 1e-12;
  int quad_nodes = 256;
  double umbilic_tol = 1e-7;
  double critical_tol = 1e-6;
  double cond_guard = 1e8;
  double immersion_guard = 1e-10;
  double axis_guard = 1e-8;
  double polar_margin = 1e-3;

  /// Throws InvalidParameter when a field is non-positive or quad_nodes is odd.
  void validate() const;
};

/// Central difference (f(x+h d) - f(x-h d)) / 2h along a direction, for
/// Eigen-valued f. With `richardson`, combines steps h and h/2 into an
/// O(h^4) estimate.
template <class F, class P>
auto directional_diff(F&& f, const P& point, const P& direction, double step, bool richardson = false) {
  auto one = [&](double h) {
    P plus = point + h * direction;
    P minus = point - h * direction;
    return ((f(plus) - f(minus)) / (2.0 * h)).eval();
  };
  if (!richardson) return one(step);
  auto coarse = one(step);
  auto fine = one(0.5 * step);
  return ((4.0 * fine - coarse) / 3.0).eval();
}

/// Scalar overload for f: double -> double.
template <class F>
double central_diff(F&& f, double x, double step, bool richardson = false) {
  auto one = [&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  if (!richardson) return one(step);
  return (4.0 * one(0.5 * step) - one(step)) / 3.0;
}

/// Solution of A x = lambda B x for symmetric A and SPD B.
struct GeneralizedEigen2 {
  Vec2 values;   // ascending
  Mat2 vectors;  // columns, B-orthonormal
};

/// Cholesky-of-B reduction to a symmetric 2x2 problem. Throws NotSPD.
GeneralizedEigen2 sym_generalized_eigen_2x2(const Mat2& a, const Mat2& b);

/// Composite Simpson estimate of (1/2pi) * integral over [0, 2pi) of a
/// periodic function sampled at n uniform nodes theta_k = 2 pi k / n.
/// Requires even n >= 4 (OddSampleCount otherwise).
double simpson_periodic(std::span<const double> samples);

/// 2-norm condition number via SVD; +inf for singular matrices.
double condition_number(const Mat3& m);

/// Orthonormal basis (columns) of the plane orthogonal to a unit vector.
Mat32 orthonormal_complement(const Vec3& unit);

}  // namespace msk
