#include "qbasket/error.hpp"

namespace qbasket {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingTicker: return "MissingTicker";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::DegenerateVolatility: return "DegenerateVolatility";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::JointGridTooLarge: return "JointGridTooLarge";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::SumRegisterNotZero: return "SumRegisterNotZero";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DegenerateBounds: return "DegenerateBounds";
    case ErrorCode::InvalidSlope: return "InvalidSlope";
    case ErrorCode::QubitCapExceeded: return "QubitCapExceeded";
    case ErrorCode::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, const std::string& stage) {
  std::string out;
  if (!stage.empty()) {
    out += "[";
    out += stage;
    out += "] ";
  }
  out += to_string(code);
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(compose(code, message, stage)),
      code_(code),
      stage_(std::move(stage)),
      detail_(message) {}

Error Error::with_stage(std::string stage) const { return Error(code_, detail_, std::move(stage)); }

}  // namespace qbasket
