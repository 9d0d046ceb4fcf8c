#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "msk/blaschke.hpp"
#include "msk/distances.hpp"
#include "support.hpp"

using namespace msk;
using std::numbers::pi;

namespace {

SurfacePatch scaled(const SurfacePatch& base, double lambda) {
  return SurfacePatch(
      nullptr,
      [base, lambda](double s, double t) {
        SurfaceJet j = base.evaluate_jet(s, t);
        for (Vec3* v : {&j.f, &j.fs, &j.ft, &j.fss, &j.fst, &j.ftt}) *v *= lambda;
        return j;
      },
      base.domain(), base.orientation());
}

std::vector<double> sample(const std::function<double(double)>& f, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = f(2 * pi * k / n);
  return out;
}

SupportJet ellipse_support(double a, double b, double th) {
  const double c = std::cos(th), s = std::sin(th);
  const double q = a * a * c * c + b * b * s * s;
  const double g = std::sqrt(q);
  const double dq = 2 * (b * b - a * a) * s * c;
  const double ddq = 2 * (b * b - a * a) * (c * c - s * s);
  return {g, dq / (2 * g), ddq / (2 * g) - dq * dq / (4 * g * q)};
}

}  // namespace

TEST_CASE("Blaschke forms on Euclidean spheres") {
  const NormModel eu = NormModel::euclidean();
  const auto grid = parameter_grid(spherical_domain(), 20, 10, 1e-3, 0.0);
  REQUIRE(grid.size() == 200);
  for (double r : {1.0, 0.5, 2.5}) {
    const SurfacePatch sphere = euclidean_sphere(r);
    for (const auto& [s, t] : grid) {
      const BlaschkeSample b = blaschke_residual(eu, sphere, s, t);
      CHECK(b.ratio == doctest::Approx(r).epsilon(1e-8));
      if (r == 1.0) CHECK(std::abs(b.residual) <= 1e-8 * b.omega_h);
    }
  }
}

TEST_CASE("Blaschke condition fails for the lp unit sphere") {
  const NormModel l4 = NormModel::lp(4);
  const SurfacePatch sphere = make_minkowski_sphere(l4, 1.0);
  double worst = 0.0;
  for (const auto& [s, t] : parameter_grid(sphere.domain(), 40, 20, 1e-3, 0.0))
    worst = std::max(worst, std::abs(blaschke_residual(l4, sphere, s, t).ratio - 1.0));
  CHECK(worst > 1e-2);
  const BlaschkeSample b = blaschke_residual(l4, sphere, std::acos(1 / std::sqrt(3.0)), pi / 4);
  CHECK(b.ratio == doctest::Approx(0.75984).epsilon(1e-4));
}

TEST_CASE("Blaschke ratio is basis invariant") {
  auto g = testing::rng(131);
  const NormModel n = NormModel::lp(4);
  const SurfacePatch e = ellipsoid_surface(1.0, 1.3, 0.8);
  for (const auto& [s, t] : testing::random_points(e, 10, g)) {
    const PointGeometry pg = point_geometry(n, e, s, t);
    const BlaschkeSample b0 = blaschke_forms(pg);
    Mat2 c;
    c << testing::uniform(g, -2, 2), testing::uniform(g, -2, 2), testing::uniform(g, -2, 2), testing::uniform(g, -2, 2);
    const BlaschkeSample b1 = blaschke_forms(pg, c);
    const double j = c.determinant();
    CHECK(b1.omega == doctest::Approx(j * b0.omega).epsilon(1e-12));
    CHECK(b1.omega_h == doctest::Approx(std::abs(j) * b0.omega_h).epsilon(1e-12));
    CHECK(b1.ratio == doctest::Approx(b0.ratio).epsilon(1e-12));
  }
}

TEST_CASE("volume forms under scaling of the surface") {
  // omega picks up lambda^2; h = II / pairing picks up lambda, so omega_h
  // picks up lambda. The exponents are measured, then compared.
  const NormModel n = NormModel::lp(4);
  const SurfacePatch e = ellipsoid_surface(1.0, 1.3, 0.8);
  const double s = 1.0, t = 0.7;
  const BlaschkeSample b1 = blaschke_forms(point_geometry(n, e, s, t));
  for (double lambda : {0.5, 2.0, 3.0}) {
    const BlaschkeSample bl = blaschke_forms(point_geometry(n, scaled(e, lambda), s, t));
    CHECK(std::log(bl.omega / b1.omega) / std::log(lambda) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::log(bl.omega_h / b1.omega_h) / std::log(lambda) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Blaschke residual needs a nondegenerate h") {
  const SurfacePatch cyl = polynomial_graph({{2, 0, 1.0}}, ParamDomain{-1, 1, -1, 1});
  try {
    blaschke_residual(NormModel::euclidean(), cyl, 0.0, 0.0);
    FAIL("expected DegenerateH");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateH);
  }
}

TEST_CASE("affine normal") {
  const SurfacePatch unit = euclidean_sphere(1.0);
  for (const auto& [s, t] : parameter_grid(unit.domain(), 10, 10, 0.05, 0.0)) {
    const Vec3 an = affine_normal(unit, s, t);
    CHECK((an - unit.evaluate_jet(s, t).f).norm() <= 1e-6);
    CHECK(compare_normals(NormModel::euclidean(), unit, s, t).discrepancy <= 1e-6);
  }

  // Ellipsoid: the tangential part Z solves II z = d(K^{1/4}); check it
  // against the closed-form Euclidean curvature of the ellipsoid.
  const double a = 1.0, b = 1.3, c = 0.8;
  const SurfacePatch e = ellipsoid_surface(a, b, c);
  auto g = testing::rng(137);
  for (const auto& [s, t] : testing::random_points(e, 10, g, 0.2, 0.0)) {
    const SurfaceJet j = e.evaluate_jet(s, t);
    const Vec3 xi = j.fs.cross(j.ft).normalized();
    auto quarter = [&](double ss, double tt) {
      return std::pow(testing::ellipsoid_curvatures(a, b, c, e.evaluate_jet(ss, tt).f).first, 0.25);
    };
    const Vec3 an = affine_normal(e, s, t);
    const Vec3 z = an - quarter(s, t) * xi;
    CHECK(std::abs(an.dot(xi) - quarter(s, t)) <= 1e-12);
    CHECK(z.norm() > 1e-3);
    const Vec2 zc = testing::chart_coords(j, z);
    Mat2 second;
    second << j.fss.dot(xi), j.fst.dot(xi), j.fst.dot(xi), j.ftt.dot(xi);
    const double h = 1e-5;
    const Vec2 grad((quarter(s + h, t) - quarter(s - h, t)) / (2 * h), (quarter(s, t + h) - quarter(s, t - h)) / (2 * h));
    CHECK((second * zc - grad).norm() <= 1e-6 * std::max(1.0, grad.norm()));
  }

  // lp unit sphere: the two normals disagree somewhere.
  const NormModel l4 = NormModel::lp(4);
  const SurfacePatch sphere = make_minkowski_sphere(l4, 1.0);
  const NormalComparison nc = compare_normals(l4, sphere, std::acos(1 / std::sqrt(3.0)), pi / 4);
  CHECK(nc.discrepancy == doctest::Approx(0.19373).epsilon(1e-4));
  CHECK(nc.angle > 0.0);
}

TEST_CASE("affine normal rejects non-elliptic points") {
  const SurfacePatch saddle = polynomial_graph({{2, 0, 1.0}, {0, 2, -1.0}}, ParamDomain{-1, 1, -1, 1});
  try {
    affine_normal(saddle, 0.0, 0.0);
    FAIL("expected NonElliptic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonElliptic);
  }
  const SurfacePatch cyl = polynomial_graph({{2, 0, 1.0}}, ParamDomain{-1, 1, -1, 1});
  CHECK_THROWS_AS(affine_normal(cyl, 0.0, 0.0), Error);
}

TEST_CASE("planar support: circles") {
  const PlanarSupportReport unit = planar_support_check([](double) { return SupportJet{1.0, 0.0, 0.0}; });
  CHECK(unit.theta.size() == 2048);
  CHECK(unit.sup_curvature_residual <= 1e-12);
  CHECK(unit.sup_ermakov_residual <= 1e-12);

  for (double c : {0.5, 2.0}) {
    const PlanarSupportReport r = planar_support_check([c](double) { return SupportJet{c, 0.0, 0.0}; }, 64);
    CHECK(r.sup_ermakov_residual == doctest::Approx(std::abs(c - 1 / (c * c * c))).epsilon(1e-14));
    for (double v : r.ermakov_residual) CHECK(v == doctest::Approx(c - 1 / (c * c * c)).epsilon(1e-14));
    CHECK(r.equivalence_defect <= 1e-12);
  }

  const std::vector<double> ones(128, 1.0);
  const PlanarSupportReport spectral = planar_support_check(std::span<const double>(ones));
  CHECK(spectral.sup_ermakov_residual <= 1e-12);
}

TEST_CASE("planar support: ellipse") {
  const PlanarSupportReport r = planar_support_check([](double th) { return ellipse_support(1.0, 1.5, th); });
  CHECK(r.sup_ermakov_residual > 0.1);
  CHECK(r.sup_ermakov_residual == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(r.equivalence_defect <= 1e-12);
  // Zero sets coincide on the grid.
  for (std::size_t k = 0; k < r.theta.size(); ++k)
    CHECK((std::abs(r.curvature_residual[k]) <= 1e-14) == (std::abs(r.ermakov_residual[k]) <= 1e-14));

  const auto samples = sample([](double th) { return ellipse_support(1.0, 1.5, th).g; }, 256);
  const PlanarSupportReport s = planar_support_check(std::span<const double>(samples));
  CHECK(s.sup_ermakov_residual == doctest::Approx(1.25).epsilon(1e-8));
  for (std::size_t k = 0; k < s.theta.size(); ++k)
    CHECK(s.ermakov_residual[k] == doctest::Approx(r.ermakov_residual[k * 8]).epsilon(1e-8));
}

TEST_CASE("planar support rejects non-convex data") {
  auto wavy = [](double th) {
    return SupportJet{1 + 0.9 * std::cos(3 * th), -2.7 * std::sin(3 * th), -8.1 * std::cos(3 * th)};
  };
  try {
    planar_support_check(wavy, 64);
    FAIL("expected NonConvexCurve");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvexCurve);
  }
  const auto negative = sample([](double) { return -1.0; }, 16);
  CHECK_THROWS_AS(planar_support_check(std::span<const double>(negative)), Error);
}

TEST_CASE("spectral derivatives") {
  const auto f = sample([](double th) { return std::sin(2 * th) + 0.5 * std::cos(5 * th); }, 64);
  const auto d1 = spectral_derivative(f, 1);
  const auto d2 = spectral_derivative(f, 2);
  for (int k = 0; k < 64; ++k) {
    const double th = 2 * pi * k / 64;
    CHECK(d1[k] == doctest::Approx(2 * std::cos(2 * th) - 2.5 * std::sin(5 * th)).epsilon(1e-12));
    CHECK(d2[k] == doctest::Approx(-4 * std::sin(2 * th) - 12.5 * std::cos(5 * th)).epsilon(1e-12));
  }
  const auto d0 = spectral_derivative(f, 0);
  for (int k = 0; k < 64; ++k) CHECK(d0[k] == doctest::Approx(f[k]).epsilon(1e-14));
}

TEST_CASE("support CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "msk_support_csv_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.csv";
  {
    std::ofstream out(good);
    out.precision(17);
    out << "theta,g\n";
    for (int k = 0; k < 32; ++k) out << 2 * pi * k / 32 << "," << 1.0 + 0.01 * std::cos(2 * pi * k / 32) << "\n";
  }
  const auto g = load_support_csv(good.string());
  REQUIRE(g.size() == 32);
  CHECK(g[0] == doctest::Approx(1.01));

  const auto bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    for (int k = 0; k < 32; ++k) out << 0.1 * k << "," << 1.0 << "\n";
  }
  auto expect_config_error = [](const std::string& path) {
    try {
      load_support_csv(path);
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  };
  expect_config_error(bad.string());
  expect_config_error((dir / "missing.csv").string());
  const auto junk = dir / "junk.csv";
  {
    std::ofstream out(junk);
    out << "0,1\nabc,def\n";
  }
  expect_config_error(junk.string());
  std::filesystem::remove_all(dir);
}
