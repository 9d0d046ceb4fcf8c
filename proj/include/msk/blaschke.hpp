#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "msk/geometry.hpp"

namespace msk {

/// Volume forms of the immersion with transversal eta, on a tangent basis.
struct BlaschkeSample {
  double omega = 0;     // det[X, Y, eta]
  double omega_h = 0;   // |det h(X_i, X_j)|^(1/2)
  double residual = 0;  // |omega| - omega_h
  double ratio = 0;     // |omega| / omega_h, basis independent
};

/// Forms on the basis (f_s, f_t) * change; `change` defaults to identity.
BlaschkeSample blaschke_forms(const PointGeometry& pg, const Mat2& change = Mat2::Identity());

/// Blaschke condition |omega| = omega_h at a chart point. Throws DegenerateH.
BlaschkeSample blaschke_residual(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                 const NumericsConfig& cfg = {});

/// K_e^(1/4) xi + Z with h(Z, X) = X(K_e^(1/4)), where K_e is the Euclidean
/// Gaussian curvature and h the second fundamental form for the Euclidean
/// normal xi. Elliptic points only: throws NonElliptic when K_e <= 0 and
/// DegenerateH when h has rank < 2.
Vec3 affine_normal(const SurfacePatch& surface, double s, double t, const NumericsConfig& cfg = {});

struct NormalComparison {
  Vec3 eta = Vec3::Zero();
  Vec3 affine = Vec3::Zero();
  double discrepancy = 0;  // |eta - affine|
  double angle = 0;        // radians
};

NormalComparison compare_normals(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                 const NumericsConfig& cfg = {});

/// Support function of a planar convex curve with two derivatives in theta.
struct SupportJet {
  double g = 0, d1 = 0, d2 = 0;
};

struct PlanarSupportReport {
  std::vector<double> theta;
  std::vector<double> curvature_residual;  // k_e - g^3, with 1 / k_e = g'' + g
  std::vector<double> ermakov_residual;    // g'' + g - g^-3
  double sup_curvature_residual = 0;
  double sup_ermakov_residual = 0;
  /// max |r1 + r2 g^3 / (g'' + g)|: the two residuals are proportional, so
  /// this vanishes up to roundoff and their zero sets coincide.
  double equivalence_defect = 0;
};

/// Residuals from an analytic support jet sampled at `nodes` uniform angles.
/// Throws NonConvexCurve if g'' + g <= 0 or g <= 0 at a sample.
PlanarSupportReport planar_support_check(const std::function<SupportJet(double)>& support, int nodes = 2048);

/// Residuals from samples g(2 pi k / n), derivatives by trigonometric
/// (FFT) differentiation.
PlanarSupportReport planar_support_check(std::span<const double> samples);

/// order-th derivative of a periodic function on [0, 2pi) from uniform samples.
std::vector<double> spectral_derivative(std::span<const double> samples, int order);

/// Reads (theta, g) rows from CSV (optional header). Requires the uniform
/// grid theta_k = 2 pi k / n. Throws ConfigError otherwise.
std::vector<double> load_support_csv(const std::string& path);

}  // namespace msk
