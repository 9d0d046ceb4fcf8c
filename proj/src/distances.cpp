#include "msk/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace msk {
namespace {

double param_scale(double v) { return std::max(1.0, std::abs(v)); }

Vec3 unit_normal(const SurfaceJet& j, int orientation) { return orientation * j.fs.cross(j.ft).normalized(); }

}  // namespace

double tangent_plane_distance(const PointGeometry& pg, const Vec3& q) {
  if (pg.pairing == 0.0) fail(ErrorKind::DegeneratePairing, "<eta, xi> vanishes");
  return (pg.p - q).dot(pg.xi) / pg.pairing;
}

ChartField tangent_plane_distance_field(const SurfacePatch& surface, const PointGeometry& pg) {
  return [surface, pg](double s, double t) { return tangent_plane_distance(pg, surface.position(s, t)); };
}

ChartField minkowski_distance_field(const NormModel& norm, const SurfacePatch& surface, const Vec3& a) {
  return [norm, surface, a](double s, double t) { return norm.gauge(surface.position(s, t) - a); };
}

Vec2 chart_gradient(const ChartField& field, double s, double t, double step) {
  const double hs = step * param_scale(s), ht = step * param_scale(t);
  return Vec2((field(s + hs, t) - field(s - hs, t)) / (2.0 * hs), (field(s, t + ht) - field(s, t - ht)) / (2.0 * ht));
}

Mat2 chart_hessian(const ChartField& field, double s, double t, double step) {
  const double hs = step * param_scale(s), ht = step * param_scale(t);
  const double f0 = field(s, t);
  const double fss = (field(s + hs, t) - 2.0 * f0 + field(s - hs, t)) / (hs * hs);
  const double ftt = (field(s, t + ht) - 2.0 * f0 + field(s, t - ht)) / (ht * ht);
  const double fst =
      (field(s + hs, t + ht) - field(s + hs, t - ht) - field(s - hs, t + ht) + field(s - hs, t - ht)) / (4.0 * hs * ht);
  Mat2 m;
  m << fss, fst, fst, ftt;
  return m;
}

Mat2 hess_b_matrix_at_critical(const ChartField& field, const PointGeometry& pg, const NumericsConfig& cfg,
                               double step) {
  const double value = field(pg.s, pg.t);
  const Vec2 grad = chart_gradient(field, pg.s, pg.t, cfg.fd_step);
  if (grad.norm() > cfg.critical_tol * (1.0 + std::abs(value)))
    fail(ErrorKind::NotCritical, "|d field| = " + std::to_string(grad.norm()) + " at (" + std::to_string(pg.s) + ", " +
                                     std::to_string(pg.t) + ")");
  return chart_hessian(field, pg.s, pg.t, step > 0.0 ? step : cfg.fd_step_second);
}

double hess_b_at_critical(const ChartField& field, const PointGeometry& pg, const Vec2& x, const Vec2& y,
                          const NumericsConfig& cfg, double step) {
  return x.dot(hess_b_matrix_at_critical(field, pg, cfg, step) * y);
}

double minkowski_distance(const NormModel& norm, const Vec3& a, const Vec3& q) { return norm.gauge(q - a); }

bool is_critical(const NormModel& norm, const PointGeometry& pg, const Vec3& a, double tol) {
  const Vec3 d = pg.p - a;
  const double n = norm.gauge(d);
  if (n == 0.0) return false;
  const Vec3 w = d / n;
  return std::min((w - pg.eta).norm(), (w + pg.eta).norm()) <= tol;
}

AffineDistance affine_distance(const PointGeometry& pg, const Vec3& a) {
  if (pg.pairing == 0.0) fail(ErrorKind::DegeneratePairing, "<eta, xi> vanishes");
  AffineDistance out;
  const Vec3 d = pg.p - a;
  out.rho = d.dot(pg.xi) / pg.pairing;
  const Vec3 tangential = d - out.rho * pg.eta;
  out.V = pg.first_form.ldlt().solve(pg.basis.transpose() * tangential);
  out.residual = (tangential - pg.basis * out.V).norm();
  return out;
}

bool is_nondegenerate(const Mat2& h, double rel_tol) {
  Eigen::JacobiSVD<Mat2> svd(h);
  const auto& sv = svd.singularValues();
  return sv(0) > 0.0 && sv(1) > rel_tol * sv(0);
}

LaplacianSample nabla_laplacian_rho(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                    const Vec3& a, const NumericsConfig& cfg) {
  const PointGeometry pg = point_geometry(norm, surface, s, t, cfg);
  if (!is_nondegenerate(pg.h_mat))
    fail(ErrorKind::DegenerateH, "affine fundamental form has rank < 2 at (" + std::to_string(s) + ", " +
                                     std::to_string(t) + ")");

  // Ambient grad_h rho = -V = rho eta - (q - a).
  auto grad_field = [&](double ss, double tt) -> Vec3 {
    const SurfaceJet j = surface.evaluate_jet(ss, tt, cfg);
    const Vec3 xi = unit_normal(j, surface.orientation());
    Vec3 eta = norm.birkhoff_point(xi, cfg);
    if (eta.dot(xi) < 0.0) eta = -eta;
    const Vec3 d = j.f - a;
    const double rho = d.dot(xi) / eta.dot(xi);
    return rho * eta - d;
  };

  const double hs = cfg.fd_step_second * param_scale(pg.s);
  const double ht = cfg.fd_step_second * param_scale(pg.t);
  const Vec3 dxs = (grad_field(pg.s + hs, pg.t) - grad_field(pg.s - hs, pg.t)) / (2.0 * hs);
  const Vec3 dxt = (grad_field(pg.s, pg.t + ht) - grad_field(pg.s, pg.t - ht)) / (2.0 * ht);

  Mat3 frame;
  frame.col(0) = pg.basis.col(0);
  frame.col(1) = pg.basis.col(1);
  frame.col(2) = pg.eta;
  const double cond = condition_number(frame);
  if (!(cond <= cfg.cond_guard))
    fail(ErrorKind::IllConditioned, "[f_s f_t eta] condition number " + std::to_string(cond));
  const Eigen::PartialPivLU<Mat3> lu(frame);
  const Vec3 cs = lu.solve(dxs);
  const Vec3 ct = lu.solve(dxt);

  const AffineDistance ad = affine_distance(pg, a);
  const Vec2 grad = ad.grad_h_rho();
  const Vec2 h_grad = pg.h_mat * grad;

  LaplacianSample out;
  out.laplacian = cs(0) + ct(1);
  out.rho = ad.rho;
  out.H = pg.H;
  out.grad_h_rho = grad;
  out.splitting_residual = std::max(std::abs(cs(2) - h_grad(0)), std::abs(ct(2) - h_grad(1)));
  return out;
}

SphereCharacterization sphere_characterization_check(const NormModel& norm, const SurfacePatch& surface,
                                                     const Vec3& a,
                                                     const std::vector<std::pair<double, double>>& grid,
                                                     const NumericsConfig& cfg) {
  SphereCharacterization out;
  out.rho_min = std::numeric_limits<double>::infinity();
  out.rho_max = -std::numeric_limits<double>::infinity();
  for (const auto& [s, t] : grid) {
    const PointGeometry pg = point_geometry(norm, surface, s, t, cfg);
    const AffineDistance ad = affine_distance(pg, a);
    out.rho_min = std::min(out.rho_min, ad.rho);
    out.rho_max = std::max(out.rho_max, ad.rho);
    out.umbilic_defect = std::max(out.umbilic_defect, std::abs(pg.lambda1 - pg.lambda2));
    out.max_tangential = std::max(out.max_tangential, pg.ambient(ad.V).norm());
    ++out.n_points;
  }
  out.rho_spread = out.n_points > 0 ? out.rho_max - out.rho_min : 0.0;
  return out;
}

}  // namespace msk
