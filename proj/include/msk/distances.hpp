#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "msk/geometry.hpp"

namespace msk {

/// Scalar function on the chart, (s, t) -> value.
using ChartField = std::function<double(double, double)>;

/// g(q) = <p - q, xi(p)> / <eta(p), xi(p)>: the eta-coefficient of p - q
/// relative to the tangent plane at p. Throws DegeneratePairing.
double tangent_plane_distance(const PointGeometry& pg, const Vec3& q);

/// q(s, t) -> g(f(s, t)) for the tangent plane anchored at pg.
ChartField tangent_plane_distance_field(const SurfacePatch& surface, const PointGeometry& pg);

/// q(s, t) -> ||f(s, t) - a||.
ChartField minkowski_distance_field(const NormModel& norm, const SurfacePatch& surface, const Vec3& a);

/// Chart gradient of `field` by central differences (step relative to max(1, |param|)).
Vec2 chart_gradient(const ChartField& field, double s, double t, double step);

/// Chart Hessian of `field` by second-order central differences.
Mat2 chart_hessian(const ChartField& field, double s, double t, double step);

/// Matrix of hess_b(field) at a critical point of `field`, in (f_s, f_t).
/// The connection term vanishes there, so this is the plain second
/// derivative. Throws NotCritical when |d field| > critical_tol (1 + |field|).
/// `step` <= 0 uses cfg.fd_step_second.
Mat2 hess_b_matrix_at_critical(const ChartField& field, const PointGeometry& pg, const NumericsConfig& cfg = {},
                               double step = 0.0);

/// hess_b(field)(X, Y) at a critical point; bilinear in (X, Y).
double hess_b_at_critical(const ChartField& field, const PointGeometry& pg, const Vec2& x, const Vec2& y,
                          const NumericsConfig& cfg = {}, double step = 0.0);

/// D_a(q) = ||q - a||.
double minkowski_distance(const NormModel& norm, const Vec3& a, const Vec3& q);

/// Whether p - a is Birkhoff orthogonal to the tangent plane, i.e.
/// (p - a) / ||p - a|| = +-eta within `tol`.
bool is_critical(const NormModel& norm, const PointGeometry& pg, const Vec3& a, double tol = 1e-8);

struct AffineDistance {
  double rho = 0;          // p - a = rho eta + V
  Vec2 V = Vec2::Zero();   // chart coordinates of the tangential part
  double residual = 0;     // |(p - a) - rho eta - V_ambient|
  Vec2 grad_h_rho() const { return -V; }
};

/// Affine distance decomposition at pg. Throws DegeneratePairing.
AffineDistance affine_distance(const PointGeometry& pg, const Vec3& a);

struct LaplacianSample {
  double laplacian = 0;           // div_nabla grad_h rho
  double rho = 0;
  double H = 0;
  Vec2 grad_h_rho = Vec2::Zero();
  double splitting_residual = 0;  // |eta-component - h(X, grad_h rho)|, max over X in {f_s, f_t}
};

/// Laplacian of the affine distance: differentiate grad_h rho = -V
/// ambiently over a central stencil, split along eta with the Gauss
/// equation and take the trace of the tangential part. Throws DegenerateH
/// when h has rank < 2 and IllConditioned when [f_s f_t eta] is too badly
/// conditioned.
LaplacianSample nabla_laplacian_rho(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                    const Vec3& a, const NumericsConfig& cfg = {});

struct SphereCharacterization {
  double rho_min = 0, rho_max = 0;
  double rho_spread = 0;       // rho_max - rho_min
  double umbilic_defect = 0;   // max |lambda1 - lambda2|
  double max_tangential = 0;   // max |V|, Euclidean
  int n_points = 0;
};

/// rho-spread and umbilicity over the given chart points.
SphereCharacterization sphere_characterization_check(const NormModel& norm, const SurfacePatch& surface,
                                                     const Vec3& a,
                                                     const std::vector<std::pair<double, double>>& grid,
                                                     const NumericsConfig& cfg = {});

/// Rank-2 test for h: smallest over largest singular value above `rel_tol`.
bool is_nondegenerate(const Mat2& h, double rel_tol = 1e-10);

}  // namespace msk
