#include "msk/norms.hpp"

#include <cmath>
#include <string>

namespace msk {
namespace {

void require_nonzero(const Vec3& x, const char* what) {
  if (x.squaredNorm() == 0.0) fail(ErrorKind::NonSmoothPoint, std::string(what) + " requested at the origin");
}

// sqrt(x^T C x) with its derivatives; C symmetric positive definite.
HomogeneousJets quadratic_jets(const Mat3& c) {
  HomogeneousJets j;
  j.value = [c](const Vec3& x) { return std::sqrt(std::max(0.0, x.dot(c * x))); };
  j.gradient = [c](const Vec3& x) -> Vec3 {
    require_nonzero(x, "gradient");
    return c * x / std::sqrt(x.dot(c * x));
  };
  j.hessian = [c](const Vec3& x) -> Mat3 {
    require_nonzero(x, "hessian");
    const double f = std::sqrt(x.dot(c * x));
    const Vec3 g = c * x / f;
    return (c - g * g.transpose()) / f;
  };
  j.third = [c](const Vec3& x) -> Tensor3 {
    require_nonzero(x, "third derivative");
    const double f = std::sqrt(x.dot(c * x));
    const Vec3 g = c * x / f;
    const Mat3 h = (c - g * g.transpose()) / f;
    Tensor3 t;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[k](i, j) = -(h(i, k) * g(j) + h(j, k) * g(i) + h(i, j) * g(k)) / f;
    return t;
  };
  return j;
}

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

// (sum |x_i|^p)^(1/p) and derivatives. Negative powers of |x_i| are taken
// at max(|x_i|, guard * |x|).
HomogeneousJets power_jets(double p, double guard) {
  struct Parts {
    double f;
    Vec3 s, a, c;  // s_i = sgn|x_i|^(p-1), a_i = ds_i/dx_i, c_i = da_i/dx_i
  };
  auto parts = [p, guard](const Vec3& x) {
    Parts out;
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += std::pow(std::abs(x(i)), p);
    out.f = std::pow(sum, 1.0 / p);
    const double floor = guard * x.norm();
    for (int i = 0; i < 3; ++i) {
      const double ax = std::abs(x(i));
      const double clamped = std::max(ax, floor);
      out.s(i) = sgn(x(i)) * std::pow(ax, p - 1.0);
      out.a(i) = (p - 1.0) * (p >= 2.0 ? std::pow(ax, p - 2.0) : std::pow(clamped, p - 2.0));
      out.c(i) = (p - 1.0) * (p - 2.0) * sgn(x(i)) * (p >= 3.0 ? std::pow(ax, p - 3.0) : std::pow(clamped, p - 3.0));
    }
    return out;
  };

  HomogeneousJets j;
  j.value = [p](const Vec3& x) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += std::pow(std::abs(x(i)), p);
    return std::pow(sum, 1.0 / p);
  };
  j.gradient = [parts, p](const Vec3& x) -> Vec3 {
    require_nonzero(x, "gradient");
    const Parts q = parts(x);
    return q.s * std::pow(q.f, 1.0 - p);
  };
  j.hessian = [parts, p](const Vec3& x) -> Mat3 {
    require_nonzero(x, "hessian");
    const Parts q = parts(x);
    Mat3 h = -(p - 1.0) * std::pow(q.f, 1.0 - 2.0 * p) * (q.s * q.s.transpose());
    h.diagonal() += std::pow(q.f, 1.0 - p) * q.a;
    return h;
  };
  j.third = [parts, p](const Vec3& x) -> Tensor3 {
    require_nonzero(x, "third derivative");
    const Parts q = parts(x);
    const double w1 = (1.0 - p) * std::pow(q.f, 1.0 - 2.0 * p);
    const double w2 = -(p - 1.0) * (1.0 - 2.0 * p) * std::pow(q.f, 1.0 - 3.0 * p);
    const double w3 = std::pow(q.f, 1.0 - p);
    Tensor3 t;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int jj = 0; jj < 3; ++jj) {
          double v = w2 * q.s(i) * q.s(jj) * q.s(k);
          if (i == jj) v += w1 * q.a(i) * q.s(k);
          if (i == k) v += w1 * q.a(i) * q.s(jj);
          if (jj == k) v += w1 * q.a(jj) * q.s(i);
          if (i == jj && jj == k) v += w3 * q.c(i);
          t[k](i, jj) = v;
        }
    return t;
  };
  return j;
}

// Replace the derivative callables by central differences of the value.
HomogeneousJets finite_difference_jets(std::function<double(const Vec3&)> value, double step, double step2) {
  HomogeneousJets j;
  j.value = value;
  auto grad = [value, step](const Vec3& x) -> Vec3 {
    require_nonzero(x, "gradient");
    const double h = step * x.norm();
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e(i) = h;
      g(i) = (value(x + e) - value(x - e)) / (2.0 * h);
    }
    return g;
  };
  j.gradient = grad;
  j.hessian = [value, step2](const Vec3& x) -> Mat3 {
    require_nonzero(x, "hessian");
    const double h = step2 * x.norm();
    const double f0 = value(x);
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      const Vec3 ei = h * Vec3::Unit(i);
      m(i, i) = (value(x + ei) - 2.0 * f0 + value(x - ei)) / (h * h);
      for (int k = 0; k < i; ++k) {
        const Vec3 ek = h * Vec3::Unit(k);
        m(i, k) = m(k, i) =
            (value(x + ei + ek) - value(x + ei - ek) - value(x - ei + ek) + value(x - ei - ek)) / (4.0 * h * h);
      }
    }
    return m;
  };
  return j;
}

Mat3 from_restricted(const Mat32& e, const Mat2& r) { return e * r * e.transpose(); }

void require_positive_definite(const Mat2& m, const char* what) {
  const double tr = m.trace();
  if (!(m(0, 0) > 0.0) || !(m.determinant() > 1e-14 * tr * tr))
    fail(ErrorKind::SingularRestriction, std::string(what) + " is not positive definite on the tangent plane");
}

}  // namespace

NormModel NormModel::euclidean() {
  NormModel n;
  n.family_ = NormFamily::euclidean;
  n.gauge_ = quadratic_jets(Mat3::Identity());
  n.dual_ = quadratic_jets(Mat3::Identity());
  return n;
}

NormModel NormModel::ellipsoid(const Mat3& a) {
  if (!a.isApprox(a.transpose(), 1e-12)) fail(ErrorKind::InvalidParameter, "ellipsoid matrix must be symmetric");
  Eigen::LLT<Mat3> llt(a);
  if (llt.info() != Eigen::Success) fail(ErrorKind::InvalidParameter, "ellipsoid matrix must be positive definite");
  NormModel n;
  n.family_ = NormFamily::ellipsoid;
  n.a_ = a;
  n.gauge_ = quadratic_jets(a);
  n.dual_ = quadratic_jets(a.inverse());
  return n;
}

NormModel NormModel::lp(double p, double axis_guard) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidParameter, "lp norm needs 1 < p < inf");
  NormModel n;
  n.family_ = NormFamily::lp;
  n.p_ = p;
  n.gauge_ = power_jets(p, axis_guard);
  n.dual_ = power_jets(p / (p - 1.0), axis_guard);
  return n;
}

NormModel NormModel::custom(HomogeneousJets gauge, std::optional<HomogeneousJets> dual, bool newton_fallback) {
  if (!gauge.value) fail(ErrorKind::InvalidParameter, "custom norm needs a gauge value callable");
  NormModel n;
  n.family_ = NormFamily::custom;
  n.newton_fallback_ = newton_fallback;
  n.gauge_ = std::move(gauge);
  if (dual) n.dual_ = std::move(*dual);
  // Derivatives the user left out come from finite differences.
  if (!n.gauge_.gradient || !n.gauge_.hessian) {
    auto fd = finite_difference_jets(n.gauge_.value, n.step_, n.step2_);
    if (!n.gauge_.gradient) n.gauge_.gradient = fd.gradient;
    if (!n.gauge_.hessian) n.gauge_.hessian = fd.hessian;
  }
  if (n.dual_.value && (!n.dual_.gradient || !n.dual_.hessian)) {
    auto fd = finite_difference_jets(n.dual_.value, n.step_, n.step2_);
    if (!n.dual_.gradient) n.dual_.gradient = fd.gradient;
    if (!n.dual_.hessian) n.dual_.hessian = fd.hessian;
  }
  return n;
}

NormModel NormModel::with_finite_differences(double step, double step_second) const {
  if (!(step > 0.0) || !(step_second > 0.0)) fail(ErrorKind::InvalidParameter, "finite-difference steps must be positive");
  NormModel n = *this;
  n.source_ = JetSource::finite_difference;
  n.step_ = step;
  n.step2_ = step_second;
  n.gauge_ = finite_difference_jets(gauge_.value, step, step_second);
  if (dual_.value) n.dual_ = finite_difference_jets(dual_.value, step, step_second);
  return n;
}

double NormModel::gauge(const Vec3& x) const { return gauge_.value(x); }
Vec3 NormModel::gauge_gradient(const Vec3& x) const { return gauge_.gradient(x); }
Mat3 NormModel::gauge_hessian(const Vec3& x) const { return gauge_.hessian(x); }

bool NormModel::has_dual_third() const noexcept { return static_cast<bool>(dual_.third); }

double NormModel::dual_support(const Vec3& xi, const NumericsConfig& cfg) const {
  require_nonzero(xi, "dual support");
  if (dual_.value) return dual_.value(xi);
  if (!newton_fallback_) fail(ErrorKind::MissingDualJets, "custom norm has no dual jets and the Newton fallback is disabled");
  return newton_birkhoff_point(xi, cfg).dot(xi);
}

Vec3 NormModel::dual_gradient(const Vec3& xi) const {
  if (!dual_.gradient) fail(ErrorKind::MissingDualJets, "no dual gradient available");
  return dual_.gradient(xi);
}

Mat3 NormModel::dual_hessian(const Vec3& xi) const {
  if (!dual_.hessian) fail(ErrorKind::MissingDualJets, "no dual hessian available");
  return dual_.hessian(xi);
}

Tensor3 NormModel::dual_third(const Vec3& xi) const {
  if (!dual_.third) fail(ErrorKind::MissingDualJets, "no analytic third derivative of the dual norm");
  return dual_.third(xi);
}

Vec3 NormModel::birkhoff_point(const Vec3& xi, const NumericsConfig& cfg) const {
  require_nonzero(xi, "Birkhoff point");
  if (dual_.gradient) return dual_.gradient(xi);
  if (!newton_fallback_) fail(ErrorKind::MissingDualJets, "custom norm has no dual jets and the Newton fallback is disabled");
  return newton_birkhoff_point(xi, cfg);
}

Vec3 NormModel::newton_birkhoff_point(const Vec3& xi_in, const NumericsConfig& cfg) const {
  // 1 / h_B(xi) is the minimum of F on the plane <x, xi> = 1, and the
  // minimizer scaled onto {F = 1} is u(xi). F is convex there, so damped
  // Newton in plane coordinates x = xi + E y converges from y = 0.
  const Vec3 xi = xi_in.normalized();
  const Mat32 e = orthonormal_complement(xi);
  Vec2 y = Vec2::Zero();
  auto at = [&](const Vec2& v) { return Vec3(xi + e * v); };
  double f = gauge(at(y));
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    const Vec3 x = at(y);
    const Vec3 grad = gauge_gradient(x);
    const Vec2 g = e.transpose() * grad;
    if (g.norm() <= cfg.newton_tol * grad.norm()) return x / gauge(x);
    Mat2 h = e.transpose() * gauge_hessian(x) * e;
    h = 0.5 * (h + h.transpose());
    Vec2 step = -h.ldlt().solve(g);
    if (!step.allFinite() || step.dot(g) >= 0.0) step = -g;  // fall back to steepest descent
    // Near the minimum F is flat to roundoff and the line search sees no
    // decrease; inside the quadratic region take the full step.
    if (-step.dot(g) <= 1e-12 * f) {
      y += step;
      f = gauge(at(y));
      continue;
    }
    double t = 1.0;
    double trial = gauge(at(y + step));
    while (trial > f + 1e-4 * t * step.dot(g) && t > 1e-12) {
      t *= 0.5;
      trial = gauge(at(y + t * step));
    }
    if (!(trial <= f)) break;
    y += t * step;
    f = trial;
  }
  const Vec3 x = at(y);
  const Vec3 grad = gauge_gradient(x);
  if ((e.transpose() * grad).norm() <= 10.0 * cfg.newton_tol * grad.norm()) return x / gauge(x);
  fail(ErrorKind::NewtonDivergence, "Birkhoff point Newton solve did not converge");
}

Mat3 NormModel::birkhoff_differential(const Vec3& xi_in, const NumericsConfig& cfg) const {
  require_nonzero(xi_in, "Birkhoff differential");
  const Vec3 xi = xi_in.normalized();
  if (dual_.hessian) return dual_.hessian(xi);
  // du is the inverse of the Weingarten map of {F = 1} at u(xi).
  const Vec3 x = birkhoff_point(xi, cfg);
  const Vec3 g = gauge_gradient(x);
  const Mat32 e = orthonormal_complement(xi);
  const Mat2 weingarten = e.transpose() * gauge_hessian(x) * e / g.norm();
  require_positive_definite(weingarten, "Weingarten map of the unit sphere");
  return from_restricted(e, weingarten.inverse());
}

Mat3 NormModel::dupin_matrix(const Vec3& xi_in, const NumericsConfig& cfg) const {
  require_nonzero(xi_in, "Dupin matrix");
  const Vec3 xi = xi_in.normalized();
  const Mat32 e = orthonormal_complement(xi);
  if (dual_.hessian) {
    Mat2 du = e.transpose() * dual_.hessian(xi) * e;
    du = 0.5 * (du + du.transpose());
    require_positive_definite(du, "Hessian of the dual norm");
    return from_restricted(e, du.inverse());
  }
  const Vec3 x = birkhoff_point(xi, cfg);
  Mat2 weingarten = e.transpose() * gauge_hessian(x) * e / gauge_gradient(x).norm();
  weingarten = 0.5 * (weingarten + weingarten.transpose());
  require_positive_definite(weingarten, "Weingarten map of the unit sphere");
  return from_restricted(e, weingarten);
}

double NormModel::dupin_form(const Vec3& eta, const Vec3& x, const Vec3& y, const NumericsConfig& cfg) const {
  return x.dot(dupin_matrix(sphere_normal(eta), cfg) * y);
}

Vec3 NormModel::sphere_normal(const Vec3& eta) const { return gauge_gradient(eta).normalized(); }

}  // namespace msk
