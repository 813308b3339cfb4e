#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbasket {

enum class ErrorCode {
  // market_data
  MissingTicker,
  EmptyIntersection,
  MalformedRow,
  TooShort,
  InvalidWeights,
  FileNotFound,
  // distribution
  DegenerateVolatility,
  DimensionMismatch,
  ValueOutOfRange,
  JointGridTooLarge,
  // quantum_core
  LayoutMismatch,
  SumRegisterNotZero,
  Overflow,
  DegenerateBounds,
  InvalidSlope,
  QubitCapExceeded,
  PrecisionUnreachable,
  // classical_bench / experiments
  InvalidInput,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carried through every module. `stage()` is filled in by the
/// experiment runner so callers can tell which pipeline step failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  Error with_stage(std::string stage) const;

 private:
  ErrorCode code_;
  std::string stage_;
  std::string detail_;
};

}  // namespace qbasket
