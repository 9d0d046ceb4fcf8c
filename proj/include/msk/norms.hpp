#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include "msk/numerics.hpp"
#include "msk/types.hpp"

namespace msk {

enum class NormFamily { euclidean, ellipsoid, lp, custom };
enum class JetSource { analytic, finite_difference };

/// Third derivative tensor of a scalar function on R^3, stored as
/// t[k](i, j) = d^3 f / dx_i dx_j dx_k.
using Tensor3 = std::array<Mat3, 3>;

/// Value and (optional) derivative callables of a positively homogeneous
/// function on R^3 minus the origin. Missing derivatives are filled in by
/// finite differences when the owning NormModel uses that jet source.
struct HomogeneousJets {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;
  std::function<Tensor3(const Vec3&)> third;
};

/// An admissible norm on R^3: the gauge F with unit sphere {F = 1} and the
/// support function h_B of the unit ball (the dual norm). The map
/// u(xi) = grad h_B(xi) sends a Euclidean normal to the boundary point of
/// the unit ball carrying that normal; du = Hess h_B restricted to xi-perp.
///
/// Immutable after construction and safe to share between threads.
class NormModel {
 public:
  static NormModel euclidean();
  /// F(x) = sqrt(x^T A x); A symmetric positive definite.
  static NormModel ellipsoid(const Mat3& a);
  /// F(x) = (sum |x_i|^p)^(1/p), 1 < p < inf. `axis_guard` clamps |x_i|
  /// from below (relative to |x|) in derivative terms that blow up on the
  /// coordinate planes.
  static NormModel lp(double p, double axis_guard = 1e-8);
  /// User-supplied gauge, with optional dual jets. Without dual jets the
  /// Birkhoff point comes from a projected Newton solve.
  static NormModel custom(HomogeneousJets gauge, std::optional<HomogeneousJets> dual = std::nullopt,
                          bool newton_fallback = true);

  /// Copy that differentiates the value callables numerically instead of
  /// using the analytic derivatives. Steps are relative to |x|.
  NormModel with_finite_differences(double step = 1e-5, double step_second = 1e-4) const;

  NormFamily family() const noexcept { return family_; }
  JetSource jet_source() const noexcept { return source_; }
  double p() const noexcept { return p_; }
  const Mat3& matrix() const noexcept { return a_; }
  double fd_step() const noexcept { return step_; }
  double fd_step_second() const noexcept { return step2_; }

  double gauge(const Vec3& x) const;
  Vec3 gauge_gradient(const Vec3& x) const;
  Mat3 gauge_hessian(const Vec3& x) const;

  bool has_dual_jets() const noexcept { return static_cast<bool>(dual_.value); }
  /// Whether analytic third derivatives of h_B are available (needed for
  /// analytic second-order jets of Minkowski spheres).
  bool has_dual_third() const noexcept;

  double dual_support(const Vec3& xi, const NumericsConfig& cfg = {}) const;
  Vec3 dual_gradient(const Vec3& xi) const;
  Mat3 dual_hessian(const Vec3& xi) const;
  Tensor3 dual_third(const Vec3& xi) const;

  /// u(xi): the point of the unit sphere whose outer Euclidean normal is
  /// xi. xi need not be normalised (u is homogeneous of degree 0).
  Vec3 birkhoff_point(const Vec3& xi, const NumericsConfig& cfg = {}) const;

  /// du at the unit vector xi/|xi| as a 3x3 matrix acting on xi-perp
  /// (and annihilating xi).
  Mat3 birkhoff_differential(const Vec3& xi, const NumericsConfig& cfg = {}) const;

  /// Matrix D with <du^{-1} X, Y> = X^T D Y for X, Y orthogonal to the
  /// unit normal xi. Throws SingularRestriction when du is singular there.
  Mat3 dupin_matrix(const Vec3& xi, const NumericsConfig& cfg = {}) const;

  /// <du^{-1}_eta X, Y> for eta on the unit sphere and X, Y tangent to it
  /// at eta. Symmetric and positive definite.
  double dupin_form(const Vec3& eta, const Vec3& x, const Vec3& y, const NumericsConfig& cfg = {}) const;

  /// Euclidean unit normal of the unit sphere at eta (normalised grad F).
  Vec3 sphere_normal(const Vec3& eta) const;

 private:
  NormModel() = default;
  Vec3 newton_birkhoff_point(const Vec3& xi, const NumericsConfig& cfg) const;

  NormFamily family_ = NormFamily::euclidean;
  JetSource source_ = JetSource::analytic;
  double p_ = 2.0;
  Mat3 a_ = Mat3::Identity();
  double step_ = 1e-5;
  double step2_ = 1e-4;
  bool newton_fallback_ = true;
  HomogeneousJets gauge_;
  HomogeneousJets dual_;
};

}  // namespace msk
