#pragma once

#include <vector>

#include "msk/norms.hpp"
#include "msk/numerics.hpp"
#include "msk/surfaces.hpp"
#include "msk/types.hpp"

namespace msk {

/// Pointwise Minkowski geometry of a surface point. Tangent vectors are
/// 2-vectors of coordinates in the chart basis (f_s, f_t); `ambient`
/// converts them to R^3.
struct PointGeometry {
  double s = 0, t = 0;
  Vec3 p = Vec3::Zero();
  Mat32 basis = Mat32::Zero();
  Mat2 first_form = Mat2::Identity();   // Euclidean metric in (f_s, f_t)
  Mat2 second_form = Mat2::Zero();      // <f_ij, xi>
  Mat2 euclidean_shape = Mat2::Zero();  // d(xi) in (f_s, f_t)

  Vec3 xi = Vec3::Zero();   // Euclidean unit normal
  Vec3 eta = Vec3::Zero();  // Birkhoff normal, on the unit sphere of the norm
  double pairing = 0;       // <eta, xi>, positive

  Mat2 W = Mat2::Zero();      // d(eta) in (f_s, f_t)
  Mat2 h_mat = Mat2::Zero();  // affine fundamental form
  Mat2 d_mat = Mat2::Zero();  // Dupin metric <du^{-1} X, Y>
  Mat2 b_mat = Mat2::Zero();  // weighted Dupin metric d / pairing

  double lambda1 = 0, lambda2 = 0;  // ascending principal curvatures
  Vec2 V1 = Vec2::Zero(), V2 = Vec2::Zero();  // principal directions, b(Vi, Vi) = 1
  double K = 0, H = 0;
  bool umbilic = false;
  bool eta_flipped = false;  // set if eta had to be re-oriented

  Vec3 ambient(const Vec2& x) const { return basis * x; }
  /// Principal directions rescaled to unit Dupin length, d(Vi, Vi) = 1.
  Vec2 dupin_v1() const;
  Vec2 dupin_v2() const;
  /// Euclidean Gaussian curvature det(d xi).
  double euclidean_K() const { return euclidean_shape.determinant(); }
};

/// Full pipeline at chart point (s, t): Euclidean normal, Birkhoff normal
/// via u, d(eta) = du o d(xi), affine fundamental form, Dupin metrics and
/// the principal data from the generalized problem -h X = lambda b X.
/// Throws DegenerateJet, SingularRestriction, ComplexEigenvalues.
PointGeometry point_geometry(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                             const NumericsConfig& cfg = {});

/// -h(X, X) / b(X, X). Throws ZeroDirection for X = 0.
double normal_curvature(const PointGeometry& pg, const Vec2& x);

/// The same quantity through the Dupin form: <du^{-1} X, d eta X> / <du^{-1} X, X>.
double normal_curvature_dupin(const PointGeometry& pg, const Vec2& x);

/// V(theta) = V1 cos(theta) + V2 sin(theta) with Dupin-unit V1, V2.
Vec2 dupin_indicatrix(const PointGeometry& pg, double theta);

/// Mean of the normal curvature over the Dupin indicatrix (periodic Simpson
/// with `nodes` samples; even, >= 4).
double mean_by_indicatrix_average(const PointGeometry& pg, int nodes);

/// k(V(theta0)) + k(V(theta0 + pi/2)).
double dupin_orthogonal_pair_sum(const PointGeometry& pg, double theta0);

/// Directions X with h(X, X) = 0, Dupin-unit. Two when K < 0, one when
/// exactly one principal curvature vanishes (relative to `zero_tol`), none
/// when K > 0. At a planar point both principal directions are returned.
std::vector<Vec2> asymptotic_directions(const PointGeometry& pg, double zero_tol = 1e-12);

/// det(h) / det(b). Throws SingularMetric.
double gaussian_by_determinants(const PointGeometry& pg);

}  // namespace msk
