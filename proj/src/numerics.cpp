#include "msk/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace msk {

void NumericsConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) fail(ErrorKind::InvalidParameter, std::string(name) + " must be positive");
  };
  positive(fd_step, "fd_step");
  positive(fd_step_second, "fd_step_second");
  positive(newton_tol, "newton_tol");
  positive(umbilic_tol, "umbilic_tol");
  positive(critical_tol, "critical_tol");
  positive(cond_guard, "cond_guard");
  positive(immersion_guard, "immersion_guard");
  positive(axis_guard, "axis_guard");
  positive(polar_margin, "polar_margin");
  if (newton_max_iter <= 0) fail(ErrorKind::InvalidParameter, "newton_max_iter must be positive");
  if (quad_nodes < 4 || quad_nodes % 2 != 0)
    fail(ErrorKind::InvalidParameter, "quad_nodes must be even and >= 4");
}

GeneralizedEigen2 sym_generalized_eigen_2x2(const Mat2& a, const Mat2& b) {
  // B = L L^T with L lower triangular.
  const double l00sq = b(0, 0);
  if (!(l00sq > 0.0)) fail(ErrorKind::NotSPD, "B(0,0) is not positive");
  const double l00 = std::sqrt(l00sq);
  const double l10 = 0.5 * (b(1, 0) + b(0, 1)) / l00;
  const double l11sq = b(1, 1) - l10 * l10;
  if (!(l11sq > 0.0)) fail(ErrorKind::NotSPD, "B is not positive definite");
  const double l11 = std::sqrt(l11sq);

  Mat2 linv;
  linv << 1.0 / l00, 0.0, -l10 / (l00 * l11), 1.0 / l11;
  Mat2 as = 0.5 * (a + a.transpose());
  Mat2 c = linv * as * linv.transpose();

  // Closed-form symmetric 2x2 eigen decomposition.
  const double p = 0.5 * (c(0, 0) + c(1, 1));
  const double q = 0.5 * (c(0, 0) - c(1, 1));
  const double off = 0.5 * (c(0, 1) + c(1, 0));
  const double r = std::hypot(q, off);
  GeneralizedEigen2 out;
  out.values << p - r, p + r;

  Mat2 y;
  if (r == 0.0) {
    y.setIdentity();
  } else {
    // Rotation angle diagonalising c; column 1 belongs to the larger value.
    const double phi = 0.5 * std::atan2(off, q);
    const double cs = std::cos(phi), sn = std::sin(phi);
    y << -sn, cs, cs, sn;
  }
  out.vectors = linv.transpose() * y;
  return out;
}

double simpson_periodic(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4 || n % 2 != 0)
    fail(ErrorKind::OddSampleCount, "simpson_periodic needs an even count >= 4, got " + std::to_string(n));
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += (k % 2 == 0 ? 2.0 : 4.0) * samples[k];
  return sum / (3.0 * static_cast<double>(n));
}

double condition_number(const Mat3& m) {
  const Vec3 sv = Eigen::JacobiSVD<Mat3>(m).singularValues();
  if (sv(2) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(2);
}

Mat32 orthonormal_complement(const Vec3& unit) {
  // Pick the axis least aligned with `unit` to seed Gram-Schmidt.
  Vec3 seed = Vec3::Unit(0);
  const Vec3 a = unit.cwiseAbs();
  if (a(1) <= a(0) && a(1) <= a(2)) seed = Vec3::Unit(1);
  else if (a(2) <= a(0) && a(2) <= a(1)) seed = Vec3::Unit(2);
  Vec3 e1 = (seed - seed.dot(unit) * unit).normalized();
  Vec3 e2 = unit.cross(e1);
  Mat32 basis;
  basis.col(0) = e1;
  basis.col(1) = e2;
  return basis;
}

}  // namespace msk
