#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "msk/norms.hpp"
#include "msk/numerics.hpp"
#include "msk/types.hpp"

namespace msk {

/// Second-order jet of a chart f(s, t).
struct SurfaceJet {
  Vec3 f, fs, ft, fss, fst, ftt;

  Mat32 basis() const {
    Mat32 j;
    j.col(0) = fs;
    j.col(1) = ft;
    return j;
  }
  Mat2 first_fundamental_form() const {
    Mat2 g;
    g << fs.dot(fs), fs.dot(ft), fs.dot(ft), ft.dot(ft);
    return g;
  }
};

/// Second-order jet of a scalar function phi(s, t), used by graph surfaces.
struct ScalarJet2 {
  double v = 0, s = 0, t = 0, ss = 0, st = 0, tt = 0;
};

struct ParamDomain {
  double s0 = 0, s1 = 1, t0 = 0, t1 = 1;
  bool periodic_s = false;
  bool periodic_t = false;
};

enum class SurfaceFamily { euclidean_sphere, ellipsoid, graph, torus, minkowski_sphere, catenoid, custom };

/// Parameters of the built-in families, kept so callers can compare with
/// closed forms. Unused fields stay at their defaults.
struct SurfaceInfo {
  SurfaceFamily family = SurfaceFamily::custom;
  double radius = 0.0;            // euclidean_sphere r, minkowski_sphere rho, torus minor r
  Vec3 axes = Vec3::Zero();       // ellipsoid (a, b, c); torus (R, r, 0); catenoid (c, 0, 0)
  Vec3 center = Vec3::Zero();
};

/// An oriented single-chart immersed patch f: [s0,s1] x [t0,t1] -> R^3.
/// Orientation +1 takes the Euclidean normal along f_s x f_t, -1 flips it.
/// Immutable; evaluate_jet is pure and thread safe.
class SurfacePatch {
 public:
  using PositionFn = std::function<Vec3(double, double)>;
  using JetFn = std::function<SurfaceJet(double, double)>;

  /// `jet` may be empty, in which case the patch uses finite differences of
  /// `position`.
  SurfacePatch(PositionFn position, JetFn jet, ParamDomain domain, int orientation = 1,
               SurfaceInfo info = {});

  /// Copy that ignores the analytic jet and differentiates `position`
  /// numerically (steps relative to max(1, |parameter|)).
  SurfacePatch with_finite_differences(double step = 1e-5, double step_second = 1e-4) const;
  SurfacePatch flipped() const;

  /// Jet at (s, t) after periodic wrapping. Throws OutOfDomain or
  /// DegenerateJet (|f_s x f_t| below the immersion guard).
  SurfaceJet evaluate_jet(double s, double t, const NumericsConfig& cfg = {}) const;
  Vec3 position(double s, double t) const;

  /// Periodic wrapping plus domain check.
  std::pair<double, double> wrap(double s, double t) const;

  const ParamDomain& domain() const noexcept { return domain_; }
  int orientation() const noexcept { return orientation_; }
  JetSource jet_source() const noexcept { return source_; }
  const SurfaceInfo& info() const noexcept { return info_; }

 private:
  SurfaceJet finite_difference_jet(double s, double t) const;

  PositionFn position_;
  JetFn jet_;
  ParamDomain domain_;
  int orientation_ = 1;
  SurfaceInfo info_;
  JetSource source_ = JetSource::analytic;
  double step_ = 1e-5;
  double step2_ = 1e-4;
};

/// Unit-sphere chart xi(s, t) = (sin s cos t, sin s sin t, cos s) and its jet.
SurfaceJet unit_sphere_jet(double s, double t);
ParamDomain spherical_domain();

SurfacePatch euclidean_sphere(double r, const Vec3& center = Vec3::Zero());
SurfacePatch ellipsoid_surface(double a, double b, double c);
/// Graph (s, t, phi(s, t)) over the given rectangle.
SurfacePatch graph_surface(std::function<ScalarJet2(double, double)> phi, ParamDomain domain);
/// Graph of sum c * s^i * t^j over terms (i, j, c).
SurfacePatch polynomial_graph(std::vector<std::tuple<int, int, double>> terms, ParamDomain domain);
SurfacePatch torus(double major, double minor);
/// Catenoid (c cosh(s/c) cos t, c cosh(s/c) sin t, s), s in [-s_max, s_max].
SurfacePatch catenoid(double c, double s_max = 2.0);
/// center + rho * u(xi(s, t)). Fully analytic jets when the norm provides
/// third derivatives of its dual; otherwise first derivatives come from du
/// and second derivatives from central differences of those.
SurfacePatch make_minkowski_sphere(const NormModel& norm, double rho, const Vec3& center = Vec3::Zero(),
                                   const NumericsConfig& cfg = {});

/// Precompose the chart with (u, v) -> offset + L (u, v). The orientation is
/// adjusted so the Euclidean normal is unchanged.
SurfacePatch reparametrized(const SurfacePatch& surface, const Mat2& linear, const Vec2& offset);

/// Uniform grid of interior parameter points: ns x nt nodes at cell centres
/// of the domain shrunk by the margins, row-major in s.
std::vector<std::pair<double, double>> parameter_grid(const ParamDomain& domain, int ns, int nt, double margin_s,
                                                      double margin_t);

}  // namespace msk
