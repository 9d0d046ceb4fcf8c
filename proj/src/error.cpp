#include "msk/error.hpp"

namespace msk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::MissingDualJets: return "MissingDualJets";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::SingularRestriction: return "SingularRestriction";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DegenerateJet: return "DegenerateJet";
    case ErrorKind::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DegeneratePairing: return "DegeneratePairing";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::DegenerateH: return "DegenerateH";
    case ErrorKind::NonElliptic: return "NonElliptic";
    case ErrorKind::NonConvexCurve: return "NonConvexCurve";
    case ErrorKind::OddSampleCount: return "OddSampleCount";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace msk
