#pragma once

// Shared generators and independent oracles for the test suites. Nothing
// here calls into the code path it is used to check.

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "msk/geometry.hpp"

namespace msk::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Vec3 random_unit(std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do v = Vec3(n(g), n(g), n(g));
  while (v.norm() < 1e-3);
  return v.normalized();
}

/// Unit vectors at least `guard` away from every coordinate plane. The lp
/// unit spheres flatten on those planes, so samples stay clear of them.
inline Vec3 random_unit_off_planes(std::mt19937_64& g, double guard = 0.1) {
  Vec3 v;
  do v = random_unit(g);
  while (v.cwiseAbs().minCoeff() < guard);
  return v;
}

/// Random chart points whose Euclidean normal stays off the coordinate planes.
inline std::vector<std::pair<double, double>> random_points(const SurfacePatch& surface, int n, std::mt19937_64& g,
                                                            double margin = 0.25, double guard = 0.1) {
  const ParamDomain& d = surface.domain();
  std::vector<std::pair<double, double>> out;
  while (static_cast<int>(out.size()) < n) {
    const double s = uniform(g, d.s0 + margin, d.s1 - margin);
    const double t = uniform(g, d.t0 + (d.periodic_t ? 0.0 : margin), d.t1 - (d.periodic_t ? 0.0 : margin));
    const SurfaceJet j = surface.evaluate_jet(s, t);
    const Vec3 xi = j.fs.cross(j.ft).normalized();
    if (xi.cwiseAbs().minCoeff() < guard) continue;
    out.emplace_back(s, t);
  }
  return out;
}

/// Tangent 3-vector to coordinates in (f_s, f_t) by least squares.
inline Vec2 chart_coords(const SurfaceJet& j, const Vec3& v) {
  return j.basis().colPivHouseholderQr().solve(v);
}

/// d(eta) by central differences of (s, t) -> u(xi(s, t)), expressed in the
/// tangent basis: an oracle for the du o d(xi) chain rule.
inline Mat2 fd_birkhoff_gauss_differential(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                           double step) {
  auto eta = [&](double ss, double tt) {
    const SurfaceJet j = surface.evaluate_jet(ss, tt);
    return norm.birkhoff_point(surface.orientation() * j.fs.cross(j.ft).normalized());
  };
  const SurfaceJet j = surface.evaluate_jet(s, t);
  Mat2 w;
  w.col(0) = chart_coords(j, (eta(s + step, t) - eta(s - step, t)) / (2.0 * step));
  w.col(1) = chart_coords(j, (eta(s, t + step) - eta(s, t - step)) / (2.0 * step));
  return w;
}

/// Hessian of a scalar function on R^3 by second central differences.
template <class F>
Mat3 fd_hessian(F&& f, const Vec3& x, double h) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const Vec3 ei = h * Vec3::Unit(i), ek = h * Vec3::Unit(k);
      m(i, k) = (f(x + ei + ek) - f(x + ei - ek) - f(x - ei + ek) + f(x - ei - ek)) / (4.0 * h * h);
    }
  return m;
}

/// Classical Gaussian and mean curvature of the ellipsoid
/// x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 at x (outward normal, convex positive).
inline std::pair<double, double> ellipsoid_curvatures(double a, double b, double c, const Vec3& x) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  const double q = x(0) * x(0) / (a2 * a2) + x(1) * x(1) / (b2 * b2) + x(2) * x(2) / (c2 * c2);
  const double K = 1.0 / (a2 * b2 * c2 * q * q);
  const double H = (a2 + b2 + c2 - x.squaredNorm()) / (2.0 * a2 * b2 * c2 * std::pow(q, 1.5));
  return {K, H};
}

/// Relative difference with a floor of 1 on the scale.
inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace msk::testing
