#include "msk/blaschke.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "msk/distances.hpp"

namespace msk {
namespace {

struct EuclideanData {
  SurfaceJet jet;
  Vec3 xi;
  Mat2 second_form;
  double K = 0;
};

EuclideanData euclidean_data(const SurfacePatch& surface, double s, double t, const NumericsConfig& cfg) {
  EuclideanData e;
  e.jet = surface.evaluate_jet(s, t, cfg);
  e.xi = surface.orientation() * e.jet.fs.cross(e.jet.ft).normalized();
  e.second_form << e.jet.fss.dot(e.xi), e.jet.fst.dot(e.xi), e.jet.fst.dot(e.xi), e.jet.ftt.dot(e.xi);
  e.K = e.second_form.determinant() / e.jet.first_fundamental_form().determinant();
  return e;
}

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

BlaschkeSample blaschke_forms(const PointGeometry& pg, const Mat2& change) {
  const Mat32 basis = pg.basis * change;
  Mat3 m;
  m.col(0) = basis.col(0);
  m.col(1) = basis.col(1);
  m.col(2) = pg.eta;
  BlaschkeSample out;
  out.omega = m.determinant();
  out.omega_h = std::sqrt(std::abs((change.transpose() * pg.h_mat * change).determinant()));
  out.residual = std::abs(out.omega) - out.omega_h;
  out.ratio = std::abs(out.omega) / out.omega_h;
  return out;
}

BlaschkeSample blaschke_residual(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                 const NumericsConfig& cfg) {
  const PointGeometry pg = point_geometry(norm, surface, s, t, cfg);
  if (!is_nondegenerate(pg.h_mat)) fail(ErrorKind::DegenerateH, "affine fundamental form has rank < 2");
  return blaschke_forms(pg);
}

Vec3 affine_normal(const SurfacePatch& surface, double s, double t, const NumericsConfig& cfg) {
  const EuclideanData e = euclidean_data(surface, s, t, cfg);
  if (!(e.K > 0.0)) fail(ErrorKind::NonElliptic, "Euclidean Gaussian curvature is not positive");
  if (!is_nondegenerate(e.second_form)) fail(ErrorKind::DegenerateH, "second fundamental form has rank < 2");
  auto quarter_root = [&](double ss, double tt) {
    const double k = euclidean_data(surface, ss, tt, cfg).K;
    if (!(k > 0.0)) fail(ErrorKind::NonElliptic, "Euclidean Gaussian curvature is not positive near the point");
    return std::pow(k, 0.25);
  };
  const Vec2 dphi = chart_gradient(quarter_root, s, t, cfg.fd_step_second);
  const Vec2 z = e.second_form.lu().solve(dphi);
  return std::pow(e.K, 0.25) * e.xi + e.jet.basis() * z;
}

NormalComparison compare_normals(const NormModel& norm, const SurfacePatch& surface, double s, double t,
                                 const NumericsConfig& cfg) {
  const PointGeometry pg = point_geometry(norm, surface, s, t, cfg);
  NormalComparison out;
  out.eta = pg.eta;
  out.affine = affine_normal(surface, s, t, cfg);
  out.discrepancy = (out.eta - out.affine).norm();
  const double c = out.eta.dot(out.affine) / (out.eta.norm() * out.affine.norm());
  out.angle = std::acos(std::clamp(c, -1.0, 1.0));
  return out;
}

namespace {

PlanarSupportReport assemble(std::vector<double> theta, const std::vector<double>& g, const std::vector<double>& d2) {
  PlanarSupportReport r;
  r.theta = std::move(theta);
  const std::size_t n = g.size();
  r.curvature_residual.resize(n);
  r.ermakov_residual.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double radius = d2[k] + g[k];
    if (!(g[k] > 0.0) || !(radius > 0.0))
      fail(ErrorKind::NonConvexCurve, "support function is not that of a strictly convex curve around the origin");
    const double g3 = g[k] * g[k] * g[k];
    const double r1 = 1.0 / radius - g3;
    const double r2 = radius - 1.0 / g3;
    r.curvature_residual[k] = r1;
    r.ermakov_residual[k] = r2;
    r.sup_curvature_residual = std::max(r.sup_curvature_residual, std::abs(r1));
    r.sup_ermakov_residual = std::max(r.sup_ermakov_residual, std::abs(r2));
    r.equivalence_defect = std::max(r.equivalence_defect, std::abs(r1 + r2 * g3 / radius));
  }
  return r;
}

}  // namespace

PlanarSupportReport planar_support_check(const std::function<SupportJet(double)>& support, int nodes) {
  if (nodes < 4) fail(ErrorKind::InvalidParameter, "planar check needs at least 4 nodes");
  std::vector<double> theta(nodes), g(nodes), d2(nodes);
  for (int k = 0; k < nodes; ++k) {
    theta[k] = 2.0 * std::numbers::pi * k / nodes;
    const SupportJet j = support(theta[k]);
    g[k] = j.g;
    d2[k] = j.d2;
  }
  return assemble(std::move(theta), g, d2);
}

PlanarSupportReport planar_support_check(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4) fail(ErrorKind::InvalidParameter, "planar check needs at least 4 samples");
  std::vector<double> theta(n);
  for (std::size_t k = 0; k < n; ++k) theta[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
  const std::vector<double> d2 = spectral_derivative(samples, 2);
  return assemble(std::move(theta), std::vector<double>(samples.begin(), samples.end()), d2);
}

std::vector<double> spectral_derivative(std::span<const double> samples, int order) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || order < 0) fail(ErrorKind::InvalidParameter, "spectral derivative needs >= 2 samples and order >= 0");
  const int m = n / 2 + 1;
  std::vector<double> real(samples.begin(), samples.end());
  std::vector<std::complex<double>> spec(m);
  auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
  fftw_plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(n, real.data(), cspec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, cspec, real.data(), FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  const std::complex<double> i(0.0, 1.0);
  for (int k = 0; k < m; ++k) {
    if (n % 2 == 0 && k == n / 2 && order % 2 == 1) {
      spec[k] = 0.0;  // Nyquist mode has no real odd derivative
      continue;
    }
    spec[k] *= std::pow(i * static_cast<double>(k), order) / static_cast<double>(n);
  }
  fftw_execute(backward);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  return real;
}

std::vector<double> load_support_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open support CSV " + path);
  std::vector<double> theta, g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double th, val;
    if (!(row >> th >> val)) {
      if (theta.empty()) continue;  // header
      fail(ErrorKind::ConfigError, "malformed support CSV row: " + line);
    }
    theta.push_back(th);
    g.push_back(val);
  }
  const std::size_t n = theta.size();
  if (n < 4) fail(ErrorKind::ConfigError, "support CSV needs at least 4 rows");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
    if (std::abs(theta[k] - expected) > 1e-9)
      fail(ErrorKind::ConfigError, "support CSV must use the uniform grid theta_k = 2 pi k / n");
  }
  return g;
}

}  // namespace msk
