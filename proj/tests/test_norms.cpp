#include <doctest.h>

#include <cmath>
#include <vector>

#include "msk/norms.hpp"
#include "support.hpp"

using namespace msk;

namespace {

Mat3 diag149() { return Vec3(1.0, 4.0, 9.0).asDiagonal(); }

std::vector<NormModel> builtin_norms() {
  Mat3 a;
  a << 2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0;
  return {NormModel::euclidean(), NormModel::ellipsoid(a), NormModel::lp(4.0), NormModel::lp(1.5)};
}

// Gauge-only copy of a norm: exercises the Newton fallback.
NormModel gauge_only(const NormModel& n, bool fallback = true) {
  HomogeneousJets jets;
  jets.value = [n](const Vec3& x) { return n.gauge(x); };
  jets.gradient = [n](const Vec3& x) { return n.gauge_gradient(x); };
  jets.hessian = [n](const Vec3& x) { return n.gauge_hessian(x); };
  return NormModel::custom(jets, std::nullopt, fallback);
}

}  // namespace

TEST_CASE("gauge examples") {
  CHECK(NormModel::euclidean().gauge(Vec3(3, 4, 0)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(NormModel::lp(4).gauge(Vec3(1, 1, 0)) == doctest::Approx(1.1892071150027210).epsilon(1e-15));
  CHECK(NormModel::ellipsoid(diag149()).gauge(Vec3(1, 1, 1)) == doctest::Approx(3.7416573867739413).epsilon(1e-15));
  CHECK(NormModel::lp(4).gauge(Vec3::Zero()) == 0.0);
}

TEST_CASE("gauge error paths") {
  CHECK_THROWS_AS(NormModel::lp(1.0), Error);
  CHECK_THROWS_AS(NormModel::lp(0.5), Error);
  try {
    NormModel::lp(4).gauge_gradient(Vec3::Zero());
    FAIL("expected NonSmoothPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSmoothPoint);
  }
  Mat3 notpd = Vec3(1.0, -1.0, 1.0).asDiagonal();
  CHECK_THROWS_AS(NormModel::ellipsoid(notpd), Error);
}

TEST_CASE("dual_support examples") {
  CHECK(NormModel::euclidean().dual_support(Vec3(0, 0, 2)) == doctest::Approx(2.0));
  CHECK(NormModel::lp(4).dual_support(Vec3(1, 1, 0)) == doctest::Approx(1.6817928305074290).epsilon(1e-15));
  CHECK(NormModel::ellipsoid(diag149()).dual_support(Vec3(0, 2, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  try {
    NormModel::euclidean().dual_support(Vec3::Zero());
    FAIL("expected NonSmoothPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSmoothPoint);
  }
}

TEST_CASE("dual_support is the maximum of <x, xi> over the unit ball") {
  // Brute-force over a sphere sample of directions, radially projected to {F = 1}.
  auto g = testing::rng(11);
  for (const NormModel& n : builtin_norms()) {
    const Vec3 xi = testing::random_unit(g);
    double best = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const Vec3 d = testing::random_unit(g);
      best = std::max(best, (d / n.gauge(d)).dot(xi));
    }
    const double h = n.dual_support(xi);
    CHECK(best <= h + 1e-12);
    CHECK(best >= h - 1e-2);
  }
}

TEST_CASE("birkhoff_point examples") {
  auto g = testing::rng(5);
  const Vec3 xi = testing::random_unit(g);
  CHECK((NormModel::euclidean().birkhoff_point(xi) - xi).norm() <= 1e-15);
  CHECK((NormModel::lp(4).birkhoff_point(Vec3(1, 0, 0)) - Vec3(1, 0, 0)).norm() <= 1e-15);

  // Symmetry puts the point on the diagonal (c, c, 0) with 2 c^4 = 1.
  const double c = 0.84089641525371454;
  const Vec3 expected(c, c, 0.0);
  const Vec3 diag = Vec3(1, 1, 0).normalized();
  CHECK((NormModel::lp(4).birkhoff_point(diag) - expected).norm() <= 1e-14);
  CHECK((gauge_only(NormModel::lp(4)).birkhoff_point(diag) - expected).norm() <= 1e-12);
}

TEST_CASE("Newton fallback agrees with the dual gradient") {
  auto g = testing::rng(17);
  for (const NormModel& n : builtin_norms()) {
    const NormModel custom = gauge_only(n);
    CHECK(custom.family() == NormFamily::custom);
    CHECK_FALSE(custom.has_dual_jets());
    for (int k = 0; k < 20; ++k) {
      const Vec3 xi = testing::random_unit_off_planes(g);
      CHECK((custom.birkhoff_point(xi) - n.birkhoff_point(xi)).norm() <= 1e-11);
      CHECK(custom.dual_support(xi) == doctest::Approx(n.dual_support(xi)).epsilon(1e-11));
      const Vec3 x = testing::random_unit(g);
      const Vec3 tangent = (x - x.dot(xi) * xi).normalized();
      const double lhs = tangent.dot(custom.dupin_matrix(xi) * tangent);
      const double rhs = tangent.dot(n.dupin_matrix(xi) * tangent);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("missing dual jets and Newton failure") {
  const NormModel strict = gauge_only(NormModel::lp(4), false);
  try {
    strict.birkhoff_point(Vec3(1, 1, 1));
    FAIL("expected MissingDualJets");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingDualJets);
  }
  CHECK_THROWS_AS(strict.dual_support(Vec3(1, 0, 0)), Error);

  NumericsConfig cfg;
  cfg.newton_max_iter = 1;
  cfg.newton_tol = 1e-300;
  try {
    gauge_only(NormModel::lp(4)).birkhoff_point(Vec3(1, 2, 3), cfg);
    FAIL("expected NewtonDivergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NewtonDivergence);
  }
}

TEST_CASE("dupin_form examples") {
  auto g = testing::rng(23);
  const NormModel eu = NormModel::euclidean();
  const Vec3 eta = testing::random_unit(g);
  const Mat32 e = orthonormal_complement(eta);
  CHECK(eu.dupin_form(eta, e.col(0), e.col(0)) == doctest::Approx(1.0));

  const NormModel l4 = NormModel::lp(4);
  for (int k = 0; k < 20; ++k) {
    const Vec3 xi = testing::random_unit_off_planes(g);
    const Vec3 point = l4.birkhoff_point(xi);
    const Mat32 b = orthonormal_complement(xi);
    const Vec3 x = b * Vec2(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
    const Vec3 y = b * Vec2(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
    CHECK(l4.dupin_form(point, x, y) == doctest::Approx(l4.dupin_form(point, y, x)).epsilon(1e-13));
  }

  // Oracle: finite-difference Hessian of h_B, restricted and inverted by hand.
  const Vec3 xi = Vec3(1, 1, 1).normalized();
  const Vec3 point = l4.birkhoff_point(xi);
  const Mat3 hess = testing::fd_hessian([&](const Vec3& v) { return l4.dual_support(v); }, xi, 1e-4);
  const Mat32 b = orthonormal_complement(xi);
  const Mat2 r = b.transpose() * hess * b;
  const double det = r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0);
  Mat2 inv;
  inv << r(1, 1) / det, -r(0, 1) / det, -r(1, 0) / det, r(0, 0) / det;
  const Vec2 c(0.6, -0.3);
  const Vec3 x = b * c;
  CHECK(l4.dupin_form(point, x, x) == doctest::Approx(c.dot(inv * c)).epsilon(1e-6));
}

TEST_CASE("dupin_form rejects a singular restriction") {
  // A flat direction: gauge with a degenerate dual Hessian on xi-perp.
  HomogeneousJets gauge;
  gauge.value = [](const Vec3& x) { return x.norm(); };
  HomogeneousJets dual;
  dual.value = [](const Vec3& x) { return x.norm(); };
  dual.gradient = [](const Vec3& x) { return Vec3(x.normalized()); };
  dual.hessian = [](const Vec3&) { return Mat3(Mat3::Zero()); };
  const NormModel flat = NormModel::custom(gauge, dual);
  try {
    flat.dupin_matrix(Vec3(0, 0, 1));
    FAIL("expected SingularRestriction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularRestriction);
  }
}

TEST_CASE("norm invariants on random samples") {
  auto g = testing::rng(29);
  std::vector<std::pair<NormModel, double>> cases;
  for (const NormModel& n : builtin_norms()) {
    cases.emplace_back(n, 1e-10);
    cases.emplace_back(n.with_finite_differences(), 1e-6);
  }
  for (const auto& [n, tol] : cases) {
    CAPTURE(static_cast<int>(n.family()));
    CAPTURE(static_cast<int>(n.jet_source()));
    for (int k = 0; k < 100; ++k) {
      const Vec3 xi = testing::random_unit_off_planes(g, 0.05);
      const Vec3 x = testing::random_unit(g) * testing::uniform(g, 0.2, 3.0);
      const double lambda = testing::uniform(g, 0.1, 5.0);

      CHECK(std::abs(n.gauge(lambda * x) - lambda * n.gauge(x)) <= 1e-12 * lambda * n.gauge(x));
      CHECK(std::abs(n.gauge(-x) - n.gauge(x)) <= 1e-14 * n.gauge(x));
      CHECK(std::abs(n.gauge_gradient(x).dot(x) - n.gauge(x)) <= tol * n.gauge(x));
      CHECK((n.gauge_hessian(x) * x).norm() <= 10 * tol * n.gauge_hessian(x).norm() * x.norm());

      const Vec3 u = n.birkhoff_point(xi);
      CHECK(std::abs(n.gauge(u) - 1.0) <= tol);
      CHECK((n.sphere_normal(u) - xi).norm() <= tol);
      CHECK(std::abs(u.dot(xi) - n.dual_support(xi)) <= tol);

      const Mat32 b = orthonormal_complement(xi);
      const Mat2 r = b.transpose() * n.birkhoff_differential(xi) * b;
      CHECK(r.determinant() > 0.0);
      CHECK(r.trace() > 0.0);
      const Vec3 t = b * Vec2(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
      CHECK(n.dupin_form(u, t, t) > 0.0);
    }
  }
}

TEST_CASE("analytic third derivative of the dual matches finite differences of its Hessian") {
  auto g = testing::rng(31);
  Mat3 a;
  a << 2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0;
  for (const NormModel& n : {NormModel::euclidean(), NormModel::ellipsoid(a), NormModel::lp(4.0), NormModel::lp(3.0)}) {
    REQUIRE(n.has_dual_third());
    for (int k = 0; k < 10; ++k) {
      const Vec3 xi = testing::random_unit_off_planes(g);
      const Tensor3 t = n.dual_third(xi);
      for (int c = 0; c < 3; ++c) {
        const double h = 1e-5;
        const Mat3 fd = (n.dual_hessian(xi + h * Vec3::Unit(c)) - n.dual_hessian(xi - h * Vec3::Unit(c))) / (2 * h);
        CHECK((t[c] - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
      }
    }
  }
  CHECK_FALSE(NormModel::lp(4).with_finite_differences().has_dual_third());
}

TEST_CASE("Euclidean normal of the unit sphere recovers xi after u") {
  auto g = testing::rng(37);
  for (const NormModel& n : {NormModel::euclidean(), NormModel::ellipsoid(diag149())}) {
    for (int k = 0; k < 50; ++k) {
      const Vec3 xi = testing::random_unit(g);
      CHECK((n.sphere_normal(n.birkhoff_point(xi)) - xi).norm() <= 1e-13);
    }
  }
}

TEST_CASE("axis guard keeps lp derivatives finite on coordinate planes") {
  const NormModel l = NormModel::lp(4);
  const Mat3 h = l.dual_hessian(Vec3(1.0, 0.0, 1.0));
  CHECK(h.allFinite());
  CHECK(l.gauge_hessian(Vec3(1.0, 0.0, 0.0)).allFinite());
}

TEST_CASE("Newton fallback converges over a dense direction sample") {
  auto g = testing::rng(19);
  for (const NormModel& n : {NormModel::lp(4), NormModel::lp(1.5), NormModel::lp(8)}) {
    const NormModel custom = gauge_only(n);
    for (int k = 0; k < 2000; ++k) {
      const Vec3 xi = testing::random_unit_off_planes(g, 0.02);
      CHECK((custom.birkhoff_point(xi) - n.birkhoff_point(xi)).norm() <= 1e-10);
    }
  }
}
