#include "msk/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace msk {
namespace {

Vec3 euclidean_normal(const SurfaceJet& j, int orientation) {
  return orientation * j.fs.cross(j.ft).normalized();
}

}  // namespace

Vec2 PointGeometry::dupin_v1() const { return V1 / std::sqrt(pairing); }
Vec2 PointGeometry::dupin_v2() const { return V2 / std::sqrt(pairing); }

PointGeometry point_geometry(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                             const NumericsConfig& cfg) {
  const SurfaceJet j = surface.evaluate_jet(s, t, cfg);
  PointGeometry pg;
  std::tie(pg.s, pg.t) = surface.wrap(s, t);
  pg.p = j.f;
  pg.basis = j.basis();
  pg.first_form = j.first_fundamental_form();
  pg.xi = euclidean_normal(j, surface.orientation());
  pg.second_form << j.fss.dot(pg.xi), j.fst.dot(pg.xi), j.fst.dot(pg.xi), j.ftt.dot(pg.xi);

  const Mat2 first_inv = pg.first_form.inverse();
  pg.euclidean_shape = -first_inv * pg.second_form;

  pg.eta = norm.birkhoff_point(pg.xi, cfg);
  const Mat3 du = norm.birkhoff_differential(pg.xi, cfg);
  pg.W = first_inv * pg.basis.transpose() * du * pg.basis * pg.euclidean_shape;

  pg.pairing = pg.eta.dot(pg.xi);
  if (pg.pairing == 0.0) fail(ErrorKind::DegeneratePairing, "<eta, xi> vanishes");
  if (pg.pairing < 0.0) {
    pg.eta = -pg.eta;
    pg.W = -pg.W;
    pg.pairing = -pg.pairing;
    pg.eta_flipped = true;
  }

  pg.h_mat = pg.second_form / pg.pairing;
  const Mat3 dupin = norm.dupin_matrix(pg.xi, cfg);
  pg.d_mat = pg.basis.transpose() * dupin * pg.basis;
  pg.d_mat = 0.5 * (pg.d_mat + pg.d_mat.transpose());
  pg.b_mat = pg.d_mat / pg.pairing;

  // b(W X, Y) must be symmetric; otherwise the jets are inconsistent.
  const Mat2 bw = pg.b_mat * pg.W;
  const double scale = std::max(bw.norm(), 1e-300);
  if ((bw - bw.transpose()).norm() > 1e-6 * scale)
    fail(ErrorKind::ComplexEigenvalues, "d(eta) is not self-adjoint for b at (" + std::to_string(s) + ", " +
                                            std::to_string(t) + ")");

  const GeneralizedEigen2 eig = sym_generalized_eigen_2x2(-pg.h_mat, pg.b_mat);
  pg.lambda1 = eig.values(0);
  pg.lambda2 = eig.values(1);
  pg.K = pg.lambda1 * pg.lambda2;
  pg.H = 0.5 * (pg.lambda1 + pg.lambda2);
  pg.umbilic = std::abs(pg.lambda1 - pg.lambda2) <=
               cfg.umbilic_tol * std::max(1.0, std::abs(pg.lambda1) + std::abs(pg.lambda2));
  if (pg.umbilic) {
    // Every direction is principal: Gram-Schmidt the chart axes under b.
    Vec2 e1(1.0, 0.0), e2(0.0, 1.0);
    e1 /= std::sqrt(e1.dot(pg.b_mat * e1));
    e2 -= e1.dot(pg.b_mat * e2) * e1;
    e2 /= std::sqrt(e2.dot(pg.b_mat * e2));
    pg.V1 = e1;
    pg.V2 = e2;
  } else {
    pg.V1 = eig.vectors.col(0);
    pg.V2 = eig.vectors.col(1);
  }
  return pg;
}

double normal_curvature(const PointGeometry& pg, const Vec2& x) {
  const double bxx = x.dot(pg.b_mat * x);
  if (x.squaredNorm() == 0.0 || !(bxx > 0.0)) fail(ErrorKind::ZeroDirection, "normal curvature of a zero direction");
  return -x.dot(pg.h_mat * x) / bxx;
}

double normal_curvature_dupin(const PointGeometry& pg, const Vec2& x) {
  const double dxx = x.dot(pg.d_mat * x);
  if (x.squaredNorm() == 0.0 || !(dxx > 0.0)) fail(ErrorKind::ZeroDirection, "normal curvature of a zero direction");
  return x.dot(pg.d_mat * (pg.W * x)) / dxx;
}

Vec2 dupin_indicatrix(const PointGeometry& pg, double theta) {
  return pg.dupin_v1() * std::cos(theta) + pg.dupin_v2() * std::sin(theta);
}

double mean_by_indicatrix_average(const PointGeometry& pg, int nodes) {
  if (nodes < 4 || nodes % 2 != 0) fail(ErrorKind::OddSampleCount, "indicatrix average needs an even node count >= 4");
  std::vector<double> samples(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k)
    samples[k] = normal_curvature(pg, dupin_indicatrix(pg, 2.0 * std::numbers::pi * k / nodes));
  return simpson_periodic(samples);
}

double dupin_orthogonal_pair_sum(const PointGeometry& pg, double theta0) {
  return normal_curvature(pg, dupin_indicatrix(pg, theta0)) +
         normal_curvature(pg, dupin_indicatrix(pg, theta0 + 0.5 * std::numbers::pi));
}

std::vector<Vec2> asymptotic_directions(const PointGeometry& pg, double zero_tol) {
  const double scale = std::max(1.0, std::abs(pg.lambda1) + std::abs(pg.lambda2));
  const bool zero1 = std::abs(pg.lambda1) <= zero_tol * scale;
  const bool zero2 = std::abs(pg.lambda2) <= zero_tol * scale;
  const Vec2 v1 = pg.dupin_v1(), v2 = pg.dupin_v2();
  if (zero1 && zero2) return {v1, v2};
  if (zero1) return {v1};
  if (zero2) return {v2};
  if (pg.lambda1 * pg.lambda2 > 0.0) return {};
  // lambda1 cos^2 + lambda2 sin^2 = 0
  const double theta = std::atan(std::sqrt(-pg.lambda1 / pg.lambda2));
  const double c = std::cos(theta), s = std::sin(theta);
  return {Vec2(c * v1 + s * v2), Vec2(c * v1 - s * v2)};
}

double gaussian_by_determinants(const PointGeometry& pg) {
  const double db = pg.b_mat.determinant();
  if (!(db > 1e-300)) fail(ErrorKind::SingularMetric, "weighted Dupin metric is singular");
  return pg.h_mat.determinant() / db;
}

}  // namespace msk
