#include "checks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "msk/blaschke.hpp"
#include "msk/distances.hpp"
#include "msk/geometry.hpp"

namespace msk::cli {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

const std::vector<CheckInfo> registry = {
    {"curvature-closed-form", "principal, Gaussian and mean curvature match the closed form of the surface"},
    {"umbilicity", "every point is umbilic: d(eta) is a multiple of the identity"},
    {"prop-2-1", "mean of the normal curvature over the Dupin indicatrix equals H"},
    {"prop-2-2", "normal curvatures of two Dupin-orthogonal directions sum to 2H"},
    {"cor-2-1", "asymptotic directions at points with H = 0 are Dupin orthogonal"},
    {"prop-2-3", "K equals det(h) / det(b), in any chart basis"},
    {"lemma-3-1", "p is a critical point of the tangent-plane distance anchored at p"},
    {"thm-3-1", "b-Hessian of the tangent-plane distance at p equals -h"},
    {"prop-3-1", "Hessian of D_a along V vanishes exactly when D_a(p) = 1 / k(V)"},
    {"thm-3-2", "Laplacian of the affine distance equals 2(H rho - 1)"},
    {"minimality-scan", "Laplacian of the affine distance equals -2 where H vanishes"},
    {"prop-3-2", "affine distance to the configured center is constant over the grid"},
    {"blaschke-scan", "induced volume |omega| equals the h-volume omega_h"},
    {"affine-normal-compare", "Birkhoff normal coincides with the affine normal at elliptic points"},
    {"planar-ermakov", "planar support function solves g'' + g = g^-3"},
};

enum class CheckId {
  closed_form,
  umbilicity,
  indicatrix_mean,
  orthogonal_pair,
  asymptotic,
  determinants,
  critical,
  hessian,
  focal,
  laplacian,
  minimality,
  constant_rho,
  blaschke,
  affine_normal,
  planar,
};

CheckId id_of(const std::string& id) {
  for (std::size_t k = 0; k < registry.size(); ++k)
    if (registry[k].id == id) return static_cast<CheckId>(k);
  fail(ErrorKind::ConfigError, "unknown check \"" + id + "\"");
}

std::string location(double s, double t) {
  std::ostringstream out;
  out.precision(17);
  out << "at (s, t) = (" << s << ", " << t << "): ";
  return out.str();
}

// Errors that only mean the point lies outside a check's domain.
bool is_domain_restriction(const Error& e) {
  return e.kind() == ErrorKind::DegenerateH || e.kind() == ErrorKind::NonElliptic;
}

struct ClosedForm {
  enum class Kind { none, umbilic, ellipsoid } kind = Kind::none;
  double lambda = 0.0;  // umbilic value
  Vec3 axes = Vec3::Zero();
  int orientation = 1;
};

ClosedForm closed_form(const RunConfig& rc) {
  const SurfaceInfo& info = rc.surface.info();
  ClosedForm cf;
  cf.orientation = rc.surface.orientation();
  if (info.family == SurfaceFamily::minkowski_sphere ||
      (info.family == SurfaceFamily::euclidean_sphere && rc.norm.family() == NormFamily::euclidean)) {
    cf.kind = ClosedForm::Kind::umbilic;
    cf.lambda = cf.orientation / info.radius;
  } else if (info.family == SurfaceFamily::ellipsoid && rc.norm.family() == NormFamily::euclidean) {
    cf.kind = ClosedForm::Kind::ellipsoid;
    cf.axes = info.axes;
  }
  return cf;
}

// Classical K and H of x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 for the outward normal.
std::pair<double, double> ellipsoid_closed_form(const Vec3& axes, const Vec3& x) {
  const Vec3 sq = axes.cwiseProduct(axes);
  const double q = (x.cwiseProduct(x).array() / (sq.cwiseProduct(sq)).array()).sum();
  const double abc = sq.prod();
  return {1.0 / (abc * q * q), (sq.sum() - x.squaredNorm()) / (2.0 * abc * std::pow(q, 1.5))};
}

struct PointOutcome {
  PointFields fields;
  std::vector<std::optional<double>> residual;  // per requested check; empty = outside domain
  double rho = 0.0;
  std::exception_ptr error;
};

class Evaluator {
 public:
  Evaluator(const RunConfig& rc, std::vector<CheckId> ids) : rc_(rc), ids_(std::move(ids)), cf_(closed_form(rc)) {}

  PointOutcome evaluate(double s, double t, std::size_t index) const {
    PointOutcome out;
    try {
      std::seed_seq seq{static_cast<std::uint32_t>(rc_.seed), static_cast<std::uint32_t>(rc_.seed >> 32),
                        static_cast<std::uint32_t>(index)};
      std::mt19937_64 rng(seq);
      const PointGeometry pg = point_geometry(rc_.norm, rc_.surface, s, t, rc_.numerics);
      out.fields = {pg.s, pg.t, pg.p, pg.lambda1, pg.lambda2, pg.K, pg.H, pg.pairing, std::nullopt};
      try {
        out.fields.blaschke_ratio = blaschke_forms(pg).ratio;
        if (!is_nondegenerate(pg.h_mat)) out.fields.blaschke_ratio.reset();
      } catch (const Error& e) {
        if (!is_domain_restriction(e)) throw;
      }
      out.rho = affine_distance(pg, rc_.center).rho;
      for (CheckId id : ids_) {
        try {
          out.residual.push_back(residual(id, pg, rng));
        } catch (const Error& e) {
          if (!is_domain_restriction(e)) throw;
          out.residual.push_back(std::nullopt);
        }
      }
    } catch (const Error& e) {
      out.error = std::make_exception_ptr(Error(e.kind(), location(s, t) + e.what()));
    } catch (...) {
      out.error = std::current_exception();
    }
    return out;
  }

 private:
  double scale(const PointGeometry& pg) const { return std::max(1.0, std::abs(pg.lambda1) + std::abs(pg.lambda2)); }

  std::optional<double> residual(CheckId id, const PointGeometry& pg, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const NumericsConfig& cfg = rc_.numerics;
    switch (id) {
      case CheckId::closed_form: {
        if (cf_.kind == ClosedForm::Kind::umbilic) {
          const double e = cf_.lambda;
          return std::max({std::abs(pg.lambda1 - e), std::abs(pg.lambda2 - e), std::abs(pg.K - e * e),
                           std::abs(pg.H - e)});
        }
        if (cf_.kind == ClosedForm::Kind::ellipsoid) {
          auto [k, h] = ellipsoid_closed_form(cf_.axes, pg.p);
          h *= cf_.orientation;
          const double disc = std::sqrt(std::max(0.0, h * h - k));
          return std::max({std::abs(pg.lambda1 - (h - disc)), std::abs(pg.lambda2 - (h + disc)),
                           std::abs(pg.K - k), std::abs(pg.H - h)});
        }
        return std::nullopt;
      }
      case CheckId::umbilicity:
        if (cf_.kind == ClosedForm::Kind::umbilic && rc_.surface.info().family == SurfaceFamily::minkowski_sphere)
          return (pg.W - cf_.lambda * Mat2::Identity()).norm();
        return std::abs(pg.lambda1 - pg.lambda2);
      case CheckId::indicatrix_mean:
        return std::abs(mean_by_indicatrix_average(pg, cfg.quad_nodes) - pg.H);
      case CheckId::orthogonal_pair:
        return std::abs(dupin_orthogonal_pair_sum(pg, two_pi * unit(rng)) - 2.0 * pg.H);
      case CheckId::asymptotic: {
        if (!(pg.K < 0.0) || std::abs(pg.H) > 1e-8 * scale(pg)) return std::nullopt;
        const auto d = asymptotic_directions(pg);
        if (d.size() != 2) return std::nullopt;
        const double xx = d[0].dot(pg.d_mat * d[0]), yy = d[1].dot(pg.d_mat * d[1]);
        return std::abs(d[0].dot(pg.d_mat * d[1])) / std::sqrt(xx * yy);
      }
      case CheckId::determinants: {
        const double k = pg.lambda1 * pg.lambda2;
        const double floor = std::max(1.0, std::abs(k));
        double worst = std::abs(gaussian_by_determinants(pg) - k) / floor;
        Mat2 l;
        do l << 3 * unit(rng) - 1.5, 3 * unit(rng) - 1.5, 3 * unit(rng) - 1.5, 3 * unit(rng) - 1.5;
        while (std::abs(l.determinant()) < 0.3);
        const PointGeometry moved =
            point_geometry(rc_.norm, reparametrized(rc_.surface, l, Vec2(pg.s, pg.t)), 0.0, 0.0, cfg);
        worst = std::max(worst, std::abs(gaussian_by_determinants(moved) - k) / floor);
        return worst;
      }
      case CheckId::critical: {
        const ChartField g = tangent_plane_distance_field(rc_.surface, pg);
        return chart_gradient(g, pg.s, pg.t, cfg.fd_step).norm();
      }
      case CheckId::hessian: {
        const double h = pg.h_mat.cwiseAbs().maxCoeff();
        if (!(h > 0.0)) return std::nullopt;
        const Mat2 hess = hess_b_matrix_at_critical(tangent_plane_distance_field(rc_.surface, pg), pg, cfg);
        return (hess + pg.h_mat).cwiseAbs().maxCoeff() / h;
      }
      case CheckId::focal:
        return focal_residual(pg, rng);
      case CheckId::laplacian: {
        const LaplacianSample l = nabla_laplacian_rho(rc_.norm, rc_.surface, pg.s, pg.t, rc_.center, cfg);
        return std::abs(l.laplacian - 2.0 * (l.H * l.rho - 1.0));
      }
      case CheckId::minimality: {
        if (std::abs(pg.H) > 1e-8 * scale(pg)) return std::nullopt;
        const LaplacianSample l = nabla_laplacian_rho(rc_.norm, rc_.surface, pg.s, pg.t, rc_.center, cfg);
        return std::abs(l.laplacian + 2.0);
      }
      case CheckId::blaschke:
        if (!is_nondegenerate(pg.h_mat)) return std::nullopt;
        return std::abs(blaschke_forms(pg).ratio - 1.0);
      case CheckId::affine_normal:
        return compare_normals(rc_.norm, rc_.surface, pg.s, pg.t, cfg).discrepancy;
      case CheckId::constant_rho:
      case CheckId::planar:
        return std::nullopt;  // whole-run checks
    }
    return std::nullopt;
  }

  // D_a with a = p - dist * eta is critical at p; its Hessian along a random
  // V changes sign at dist = 1 / k(V). Bisect for the crossing.
  std::optional<double> focal_residual(const PointGeometry& pg, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    const double th = angle(rng);
    const Vec2 v = pg.dupin_v1() * std::cos(th) + pg.dupin_v2() * std::sin(th);
    const double k = normal_curvature(pg, v);
    if (std::abs(k) < 1e-6 * scale(pg)) return std::nullopt;
    auto hess_vv = [&](double dist) {
      const Vec3 a = pg.p - dist * pg.eta;
      return hess_b_at_critical(minkowski_distance_field(rc_.norm, rc_.surface, a), pg, v, v, rc_.numerics);
    };
    double lo = 0.5 / k, hi = 2.0 / k;
    const double f_lo = hess_vv(lo);
    if (!(f_lo * hess_vv(hi) < 0.0)) return std::numeric_limits<double>::infinity();
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (hess_vv(mid) * f_lo > 0.0 ? lo : hi) = mid;
    }
    return std::abs(0.5 * (lo + hi) * k - 1.0);
  }

  const RunConfig& rc_;
  std::vector<CheckId> ids_;
  ClosedForm cf_;
};

double tolerance(CheckId id, const RunConfig& rc) {
  const bool fd = rc.fd_jets;
  switch (id) {
    case CheckId::closed_form:
    case CheckId::blaschke:
      return fd ? 1e-3 : 1e-8;
    case CheckId::umbilicity:
      return fd ? 1e-3 : 1e-6;
    case CheckId::indicatrix_mean:
    case CheckId::orthogonal_pair:
      return 1e-10;
    case CheckId::asymptotic:
    case CheckId::affine_normal:
      return 1e-6;
    case CheckId::determinants:
      return 1e-8;
    case CheckId::critical:
      return rc.numerics.critical_tol;
    case CheckId::hessian:
      return 1e-3;
    case CheckId::focal:
      return 1e-4;
    case CheckId::laplacian:
    case CheckId::minimality:
      return 5e-3;
    case CheckId::constant_rho:
      return fd ? 1e-5 : 1e-8;
    case CheckId::planar:
      return 1e-12;
  }
  return 0.0;
}

void finish(CheckResult& r) {
  r.skipped = r.n_points == 0;
  r.pass = r.max_residual <= r.tolerance;
}

CheckResult planar_check(const RunConfig& rc, CheckResult r) {
  if (!rc.planar) {
    r.note = "no planar support function configured";
    finish(r);
    return r;
  }
  const PlanarSpec& p = *rc.planar;
  PlanarSupportReport report;
  if (p.support == "circle" || p.support == "constant") {
    const double c = p.radius;
    report = planar_support_check([c](double) { return SupportJet{c, 0.0, 0.0}; }, p.nodes);
  } else if (p.support == "ellipse") {
    const double a = p.a, b = p.b;
    report = planar_support_check(
        [a, b](double th) {
          const double c = std::cos(th), s = std::sin(th);
          const double q = a * a * c * c + b * b * s * s, g = std::sqrt(q);
          const double dq = 2 * (b * b - a * a) * s * c, ddq = 2 * (b * b - a * a) * (c * c - s * s);
          return SupportJet{g, dq / (2 * g), ddq / (2 * g) - dq * dq / (4 * g * q)};
        },
        p.nodes);
  } else {
    const std::vector<double> samples = load_support_csv(p.path);
    report = planar_support_check(std::span<const double>(samples));
  }
  r.n_points = static_cast<int>(report.theta.size());
  std::size_t worst = 0;
  for (std::size_t k = 0; k < report.ermakov_residual.size(); ++k)
    if (std::abs(report.ermakov_residual[k]) > std::abs(report.ermakov_residual[worst])) worst = k;
  r.max_residual = report.sup_ermakov_residual;
  r.worst_point = std::make_pair(report.theta[worst], 0.0);
  r.note = "worst_point holds (theta, 0)";
  finish(r);
  return r;
}

}  // namespace

const std::vector<CheckInfo>& check_registry() { return registry; }

const CheckInfo* find_check(const std::string& id) {
  for (const CheckInfo& c : registry)
    if (c.id == id) return &c;
  return nullptr;
}

RunResult run_checks(const RunConfig& rc, int threads) {
  std::vector<CheckId> ids;
  for (const std::string& id : rc.checks) ids.push_back(id_of(id));
  const auto grid =
      parameter_grid(rc.surface.domain(), rc.grid.ns, rc.grid.nt, rc.grid.margin_s, rc.grid.margin_t);

  const Evaluator evaluator(rc, ids);
  std::vector<PointOutcome> outcomes(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++)
      outcomes[k] = evaluator.evaluate(grid[k].first, grid[k].second, k);
  };
  const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  for (const PointOutcome& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);

  RunResult result;
  for (const PointOutcome& o : outcomes) result.fields.push_back(o.fields);

  for (std::size_t c = 0; c < ids.size(); ++c) {
    const CheckInfo& info = registry[static_cast<std::size_t>(ids[c])];
    CheckResult r;
    r.id = info.id;
    r.statement = info.statement;
    r.tolerance = tolerance(ids[c], rc);
    if (ids[c] == CheckId::planar) {
      result.checks.push_back(planar_check(rc, r));
      continue;
    }
    if (ids[c] == CheckId::constant_rho) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const PointOutcome& o : outcomes) {
        lo = std::min(lo, o.rho);
        hi = std::max(hi, o.rho);
      }
      const double mid = 0.5 * (lo + hi);
      std::size_t worst = 0;
      for (std::size_t k = 0; k < outcomes.size(); ++k)
        if (std::abs(outcomes[k].rho - mid) > std::abs(outcomes[worst].rho - mid)) worst = k;
      r.n_points = static_cast<int>(outcomes.size());
      r.max_residual = hi - lo;
      r.worst_point = std::make_pair(outcomes[worst].fields.s, outcomes[worst].fields.t);
      finish(r);
      result.checks.push_back(r);
      continue;
    }
    for (const PointOutcome& o : outcomes) {
      const auto& v = o.residual[c];
      if (!v) {
        ++r.n_skipped;
        continue;
      }
      ++r.n_points;
      // NaN counts as the worst possible residual.
      const double value = std::isnan(*v) ? std::numeric_limits<double>::infinity() : *v;
      if (!r.worst_point || value > r.max_residual) {
        r.max_residual = value;
        r.worst_point = std::make_pair(o.fields.s, o.fields.t);
      }
    }
    if (r.n_points == 0)
      r.note = ids[c] == CheckId::closed_form ? "no closed form for this norm and surface"
                                               : "no grid point lies in the domain of this check";
    finish(r);
    result.checks.push_back(r);
  }
  return result;
}

}  // namespace msk::cli
