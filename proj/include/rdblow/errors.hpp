#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdblow {

enum class ErrorCode {
  InvalidArgument,
  BallMeshUnsupported,
  ResolutionTooCoarse,
  NonFiniteSample,
  BadExponent,
  EvalAtZeroU,
  NotGradientSystem,
  NegativeInitialData,
  NegativeField,
  HypothesisFailed,
  NonpositiveJ0,
  NonpositiveE0,
  DimensionNot3,
  NonFiniteField,
  InsufficientSamples,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries a machine-readable code so
// the CLI can turn it into a structured report entry.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdblow
