#include "qsl/error.hpp"

namespace qsl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DerivativeUnavailable: return "derivative-unavailable";
    case ErrorKind::IntegrationDiverged: return "integration-diverged";
    case ErrorKind::IntegrationQuality: return "integration-quality";
    case ErrorKind::InvalidRegion: return "invalid-region";
    case ErrorKind::ChartOverflow: return "chart-overflow";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::PoleGauge: return "pole-gauge";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::UndefinedOverlap: return "undefined-overlap";
    case ErrorKind::ZeroFunction: return "zero-function";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::HypothesisViolated: return "hypothesis-violated";
    case ErrorKind::BracketingFailure: return "bracketing-failure";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Divisibility: return "divisibility";
    case ErrorKind::CalibrationIndeterminate: return "calibration-indeterminate";
    case ErrorKind::UnknownExperiment: return "unknown-experiment";
    case ErrorKind::ConfigValidation: return "config-validation";
    case ErrorKind::MissingInputs: return "missing-inputs";
    case ErrorKind::Io: return "io";
    case ErrorKind::InvalidState: return "invalid-state";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qsl
