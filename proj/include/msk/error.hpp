#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msk {

enum class ErrorKind {
  NonSmoothPoint,
  InvalidParameter,
  MissingDualJets,
  NewtonDivergence,
  SingularRestriction,
  OutOfDomain,
  DegenerateJet,
  ComplexEigenvalues,
  ZeroDirection,
  SingularMetric,
  DegeneratePairing,
  NotCritical,
  DegenerateH,
  NonElliptic,
  NonConvexCurve,
  OddSampleCount,
  NotSPD,
  IllConditioned,
  EvaluationFailure,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace msk
