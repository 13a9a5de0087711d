#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsl {

enum class ErrorKind {
  DerivativeUnavailable,
  IntegrationDiverged,
  IntegrationQuality,
  InvalidRegion,
  ChartOverflow,
  Capacity,
  PoleGauge,
  DimensionMismatch,
  UndefinedOverlap,
  ZeroFunction,
  InsufficientSamples,
  HypothesisViolated,
  BracketingFailure,
  InvalidArgument,
  Divisibility,
  CalibrationIndeterminate,
  UnknownExperiment,
  ConfigValidation,
  MissingInputs,
  Io,
  InvalidState,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace qsl
