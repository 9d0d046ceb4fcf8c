#include "msk/surfaces.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

namespace msk {

SurfacePatch::SurfacePatch(PositionFn position, JetFn jet, ParamDomain domain, int orientation, SurfaceInfo info)
    : position_(std::move(position)), jet_(std::move(jet)), domain_(domain), orientation_(orientation >= 0 ? 1 : -1),
      info_(info) {
  if (!position_ && jet_) {
    position_ = [j = jet_](double s, double t) { return j(s, t).f; };
  }
  if (!position_) fail(ErrorKind::InvalidParameter, "surface needs a position or jet callable");
  if (!jet_) source_ = JetSource::finite_difference;
}

SurfacePatch SurfacePatch::with_finite_differences(double step, double step_second) const {
  if (!(step > 0.0) || !(step_second > 0.0)) fail(ErrorKind::InvalidParameter, "finite-difference steps must be positive");
  SurfacePatch out = *this;
  out.source_ = JetSource::finite_difference;
  out.step_ = step;
  out.step2_ = step_second;
  return out;
}

SurfacePatch SurfacePatch::flipped() const {
  SurfacePatch out = *this;
  out.orientation_ = -orientation_;
  return out;
}

std::pair<double, double> SurfacePatch::wrap(double s, double t) const {
  auto wrap_axis = [](double v, double lo, double hi, bool periodic, const char* name) {
    const double width = hi - lo;
    if (periodic) {
      double w = std::fmod(v - lo, width);
      if (w < 0.0) w += width;
      return lo + w;
    }
    const double slack = 1e-12 * std::max(1.0, std::abs(width));
    if (!(v >= lo - slack && v <= hi + slack))
      fail(ErrorKind::OutOfDomain, std::string(name) + " = " + std::to_string(v) + " outside [" + std::to_string(lo) +
                                       ", " + std::to_string(hi) + "]");
    return v;
  };
  return {wrap_axis(s, domain_.s0, domain_.s1, domain_.periodic_s, "s"),
          wrap_axis(t, domain_.t0, domain_.t1, domain_.periodic_t, "t")};
}

Vec3 SurfacePatch::position(double s, double t) const {
  auto [ws, wt] = wrap(s, t);
  return position_(ws, wt);
}

SurfaceJet SurfacePatch::finite_difference_jet(double s, double t) const {
  // Stencils may leave the domain slightly; the position callable is
  // evaluated directly there.
  const double hs = step_ * std::max(1.0, std::abs(s));
  const double ht = step_ * std::max(1.0, std::abs(t));
  const double ks = step2_ * std::max(1.0, std::abs(s));
  const double kt = step2_ * std::max(1.0, std::abs(t));
  const auto& f = position_;
  SurfaceJet j;
  j.f = f(s, t);
  j.fs = (f(s + hs, t) - f(s - hs, t)) / (2.0 * hs);
  j.ft = (f(s, t + ht) - f(s, t - ht)) / (2.0 * ht);
  j.fss = (f(s + ks, t) - 2.0 * j.f + f(s - ks, t)) / (ks * ks);
  j.ftt = (f(s, t + kt) - 2.0 * j.f + f(s, t - kt)) / (kt * kt);
  j.fst = (f(s + ks, t + kt) - f(s + ks, t - kt) - f(s - ks, t + kt) + f(s - ks, t - kt)) / (4.0 * ks * kt);
  return j;
}

SurfaceJet SurfacePatch::evaluate_jet(double s, double t, const NumericsConfig& cfg) const {
  auto [ws, wt] = wrap(s, t);
  SurfaceJet j = (source_ == JetSource::analytic) ? jet_(ws, wt) : finite_difference_jet(ws, wt);
  const double area = j.fs.cross(j.ft).norm();
  if (!(area >= cfg.immersion_guard))
    fail(ErrorKind::DegenerateJet, "|f_s x f_t| = " + std::to_string(area) + " at (" + std::to_string(ws) + ", " +
                                       std::to_string(wt) + ")");
  return j;
}

SurfaceJet unit_sphere_jet(double s, double t) {
  const double ss = std::sin(s), cs = std::cos(s), st = std::sin(t), ct = std::cos(t);
  SurfaceJet j;
  j.f = Vec3(ss * ct, ss * st, cs);
  j.fs = Vec3(cs * ct, cs * st, -ss);
  j.ft = Vec3(-ss * st, ss * ct, 0.0);
  j.fss = -j.f;
  j.fst = Vec3(-cs * st, cs * ct, 0.0);
  j.ftt = Vec3(-ss * ct, -ss * st, 0.0);
  return j;
}

ParamDomain spherical_domain() {
  return ParamDomain{0.0, std::numbers::pi, 0.0, 2.0 * std::numbers::pi, false, true};
}

SurfacePatch euclidean_sphere(double r, const Vec3& center) {
  if (!(r > 0.0)) fail(ErrorKind::InvalidParameter, "sphere radius must be positive");
  SurfaceInfo info{SurfaceFamily::euclidean_sphere, r, Vec3::Zero(), center};
  auto jet = [r, center](double s, double t) {
    SurfaceJet j = unit_sphere_jet(s, t);
    j.f = center + r * j.f;
    j.fs *= r;
    j.ft *= r;
    j.fss *= r;
    j.fst *= r;
    j.ftt *= r;
    return j;
  };
  return SurfacePatch(nullptr, jet, spherical_domain(), 1, info);
}

SurfacePatch ellipsoid_surface(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) fail(ErrorKind::InvalidParameter, "ellipsoid semi-axes must be positive");
  SurfaceInfo info{SurfaceFamily::ellipsoid, 0.0, Vec3(a, b, c), Vec3::Zero()};
  const Vec3 axes(a, b, c);
  auto jet = [axes](double s, double t) {
    SurfaceJet j = unit_sphere_jet(s, t);
    j.f = axes.cwiseProduct(j.f);
    j.fs = axes.cwiseProduct(j.fs);
    j.ft = axes.cwiseProduct(j.ft);
    j.fss = axes.cwiseProduct(j.fss);
    j.fst = axes.cwiseProduct(j.fst);
    j.ftt = axes.cwiseProduct(j.ftt);
    return j;
  };
  return SurfacePatch(nullptr, jet, spherical_domain(), 1, info);
}

SurfacePatch graph_surface(std::function<ScalarJet2(double, double)> phi, ParamDomain domain) {
  SurfaceInfo info{SurfaceFamily::graph, 0.0, Vec3::Zero(), Vec3::Zero()};
  auto jet = [phi = std::move(phi)](double s, double t) {
    const ScalarJet2 p = phi(s, t);
    SurfaceJet j;
    j.f = Vec3(s, t, p.v);
    j.fs = Vec3(1.0, 0.0, p.s);
    j.ft = Vec3(0.0, 1.0, p.t);
    j.fss = Vec3(0.0, 0.0, p.ss);
    j.fst = Vec3(0.0, 0.0, p.st);
    j.ftt = Vec3(0.0, 0.0, p.tt);
    return j;
  };
  return SurfacePatch(nullptr, jet, domain, 1, info);
}

SurfacePatch polynomial_graph(std::vector<std::tuple<int, int, double>> terms, ParamDomain domain) {
  for (const auto& [i, j, c] : terms)
    if (i < 0 || j < 0) fail(ErrorKind::InvalidParameter, "polynomial exponents must be non-negative");
  auto mono = [](double x, int n, int d) {
    // d-th derivative of x^n
    if (d > n) return 0.0;
    double coef = 1.0;
    for (int k = 0; k < d; ++k) coef *= (n - k);
    return coef * std::pow(x, n - d);
  };
  auto phi = [terms = std::move(terms), mono](double s, double t) {
    ScalarJet2 p;
    for (const auto& [i, j, c] : terms) {
      p.v += c * mono(s, i, 0) * mono(t, j, 0);
      p.s += c * mono(s, i, 1) * mono(t, j, 0);
      p.t += c * mono(s, i, 0) * mono(t, j, 1);
      p.ss += c * mono(s, i, 2) * mono(t, j, 0);
      p.st += c * mono(s, i, 1) * mono(t, j, 1);
      p.tt += c * mono(s, i, 0) * mono(t, j, 2);
    }
    return p;
  };
  return graph_surface(phi, domain);
}

SurfacePatch torus(double major, double minor) {
  if (!(major > minor && minor > 0.0)) fail(ErrorKind::InvalidParameter, "torus needs R > r > 0");
  SurfaceInfo info{SurfaceFamily::torus, minor, Vec3(major, minor, 0.0), Vec3::Zero()};
  auto jet = [major, minor](double s, double t) {
    const double cs = std::cos(s), ss = std::sin(s), ct = std::cos(t), st = std::sin(t);
    const double w = major + minor * cs;
    SurfaceJet j;
    j.f = Vec3(w * ct, w * st, minor * ss);
    j.fs = Vec3(-minor * ss * ct, -minor * ss * st, minor * cs);
    j.ft = Vec3(-w * st, w * ct, 0.0);
    j.fss = Vec3(-minor * cs * ct, -minor * cs * st, -minor * ss);
    j.fst = Vec3(minor * ss * st, -minor * ss * ct, 0.0);
    j.ftt = Vec3(-w * ct, -w * st, 0.0);
    return j;
  };
  const double two_pi = 2.0 * std::numbers::pi;
  // f_s x f_t points inward; flip for the outward normal.
  return SurfacePatch(nullptr, jet, ParamDomain{0.0, two_pi, 0.0, two_pi, true, true}, -1, info);
}

SurfacePatch catenoid(double c, double s_max) {
  if (!(c > 0.0) || !(s_max > 0.0)) fail(ErrorKind::InvalidParameter, "catenoid needs c > 0 and s_max > 0");
  SurfaceInfo info{SurfaceFamily::catenoid, 0.0, Vec3(c, 0.0, 0.0), Vec3::Zero()};
  auto jet = [c](double s, double t) {
    const double ch = std::cosh(s / c), sh = std::sinh(s / c), ct = std::cos(t), st = std::sin(t);
    SurfaceJet j;
    j.f = Vec3(c * ch * ct, c * ch * st, s);
    j.fs = Vec3(sh * ct, sh * st, 1.0);
    j.ft = Vec3(-c * ch * st, c * ch * ct, 0.0);
    j.fss = Vec3(ch * ct / c, ch * st / c, 0.0);
    j.fst = Vec3(-sh * st, sh * ct, 0.0);
    j.ftt = Vec3(-c * ch * ct, -c * ch * st, 0.0);
    return j;
  };
  return SurfacePatch(nullptr, jet, ParamDomain{-s_max, s_max, 0.0, 2.0 * std::numbers::pi, false, true}, 1, info);
}

SurfacePatch make_minkowski_sphere(const NormModel& norm, double rho, const Vec3& center, const NumericsConfig& cfg) {
  if (!(rho > 0.0)) fail(ErrorKind::InvalidParameter, "Minkowski sphere radius must be positive");
  SurfaceInfo info{SurfaceFamily::minkowski_sphere, rho, Vec3::Zero(), center};
  auto position = [norm, rho, center, cfg](double s, double t) {
    return Vec3(center + rho * norm.birkhoff_point(unit_sphere_jet(s, t).f, cfg));
  };
  if (!(norm.has_dual_third() && norm.jet_source() == JetSource::analytic)) {
    // First derivatives by the chain rule through du; second derivatives by
    // central differences of those, on a 10x wider stencil since du may
    // itself carry finite-difference noise.
    auto first = [norm, rho, cfg](double s, double t) {
      const SurfaceJet xi = unit_sphere_jet(s, t);
      const Mat3 du = norm.birkhoff_differential(xi.f, cfg);
      return std::pair<Vec3, Vec3>(rho * du * xi.fs, rho * du * xi.ft);
    };
    auto jet = [position, first, cfg](double s, double t) {
      const double ks = 10.0 * cfg.fd_step_second * std::max(1.0, std::abs(s));
      const double kt = 10.0 * cfg.fd_step_second * std::max(1.0, std::abs(t));
      SurfaceJet j;
      j.f = position(s, t);
      std::tie(j.fs, j.ft) = first(s, t);
      const auto [sp_s, sp_t] = first(s + ks, t);
      const auto [sm_s, sm_t] = first(s - ks, t);
      const auto [tp_s, tp_t] = first(s, t + kt);
      const auto [tm_s, tm_t] = first(s, t - kt);
      j.fss = (sp_s - sm_s) / (2.0 * ks);
      j.ftt = (tp_t - tm_t) / (2.0 * kt);
      j.fst = 0.5 * ((sp_t - sm_t) / (2.0 * ks) + (tp_s - tm_s) / (2.0 * kt));
      return j;
    };
    return SurfacePatch(position, jet, spherical_domain(), 1, info);
  }
  auto jet = [norm, rho, center](double s, double t) {
    const SurfaceJet xi = unit_sphere_jet(s, t);
    const Mat3 h = norm.dual_hessian(xi.f);
    const Tensor3 third = norm.dual_third(xi.f);
    auto contract = [&third](const Vec3& a, const Vec3& b) {
      Vec3 out = Vec3::Zero();
      for (int k = 0; k < 3; ++k) out += b(k) * (third[k] * a);
      return out;
    };
    SurfaceJet j;
    j.f = center + rho * norm.dual_gradient(xi.f);
    j.fs = rho * h * xi.fs;
    j.ft = rho * h * xi.ft;
    j.fss = rho * (contract(xi.fs, xi.fs) + h * xi.fss);
    j.fst = rho * (contract(xi.fs, xi.ft) + h * xi.fst);
    j.ftt = rho * (contract(xi.ft, xi.ft) + h * xi.ftt);
    return j;
  };
  return SurfacePatch(position, jet, spherical_domain(), 1, info);
}

SurfacePatch reparametrized(const SurfacePatch& surface, const Mat2& linear, const Vec2& offset) {
  const double det = linear.determinant();
  if (det == 0.0) fail(ErrorKind::InvalidParameter, "reparametrization must be invertible");
  auto map = [linear, offset](double u, double v) { return Vec2(offset + linear * Vec2(u, v)); };
  auto position = [surface, map](double u, double v) {
    const Vec2 st = map(u, v);
    return surface.position(st(0), st(1));
  };
  SurfacePatch::JetFn jet;
  if (surface.jet_source() == JetSource::analytic) {
    jet = [surface, map, linear](double u, double v) {
      const Vec2 st = map(u, v);
      const SurfaceJet j = surface.evaluate_jet(st(0), st(1));
      auto second = [&](int a, int b) {
        return Vec3(linear(0, a) * linear(0, b) * j.fss + (linear(0, a) * linear(1, b) + linear(1, a) * linear(0, b)) * j.fst +
                    linear(1, a) * linear(1, b) * j.ftt);
      };
      SurfaceJet out;
      out.f = j.f;
      out.fs = linear(0, 0) * j.fs + linear(1, 0) * j.ft;
      out.ft = linear(0, 1) * j.fs + linear(1, 1) * j.ft;
      out.fss = second(0, 0);
      out.fst = second(0, 1);
      out.ftt = second(1, 1);
      return out;
    };
  }
  const double inf = std::numeric_limits<double>::infinity();
  const int orientation = surface.orientation() * (det > 0.0 ? 1 : -1);
  SurfacePatch out(position, jet, ParamDomain{-inf, inf, -inf, inf, false, false}, orientation, surface.info());
  return out;
}

std::vector<std::pair<double, double>> parameter_grid(const ParamDomain& domain, int ns, int nt, double margin_s,
                                                      double margin_t) {
  if (ns < 1 || nt < 1) fail(ErrorKind::InvalidParameter, "grid counts must be positive");
  const double s0 = domain.s0 + margin_s, s1 = domain.s1 - margin_s;
  const double t0 = domain.t0 + margin_t, t1 = domain.t1 - margin_t;
  if (!(s1 > s0) || !(t1 > t0)) fail(ErrorKind::InvalidParameter, "grid margins leave an empty domain");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(ns) * nt);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j)
      pts.emplace_back(s0 + (s1 - s0) * (i + 0.5) / ns, t0 + (t1 - t0) * (j + 0.5) / nt);
  return pts;
}

}  // namespace msk
