#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace msk::cli {

struct CheckInfo {
  std::string id;
  std::string statement;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& id);

struct CheckResult {
  std::string id;
  std::string statement;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;  // no point of the run was in the check's domain
  std::optional<std::pair<double, double>> worst_point;
  int n_points = 0;
  int n_skipped = 0;
  std::string note;
};

struct PointFields {
  double s = 0, t = 0;
  Vec3 p = Vec3::Zero();
  double lambda1 = 0, lambda2 = 0, K = 0, H = 0, pairing = 0;
  std::optional<double> blaschke_ratio;
};

struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<PointFields> fields;  // row-major over the grid
};

/// Evaluates every requested check over the grid. Point work is spread over
/// `threads` workers; results are merged in row-major order, so the output
/// does not depend on the thread count. Numerical failures are rethrown as
/// Error with the chart location prepended.
RunResult run_checks(const RunConfig& config, int threads);

}  // namespace msk::cli
