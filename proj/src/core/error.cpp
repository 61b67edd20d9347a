#include "catnav/core/error.hpp"

namespace catnav {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateLabel: return "duplicate-label";
    case ErrorCode::kRiskOutOfRange: return "risk-out-of-range";
    case ErrorCode::kMissingField: return "missing-field";
    case ErrorCode::kInvalidLabel: return "invalid-label";
    case ErrorCode::kZeroVector: return "zero-vector";
    case ErrorCode::kWrongDimension: return "wrong-dimension";
    case ErrorCode::kNotNormalized: return "not-normalized";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kSizeMismatch: return "size-mismatch";
    case ErrorCode::kMissingRisk: return "missing-risk";
    case ErrorCode::kSourceMismatch: return "source-mismatch";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kSchemaVersion: return "schema-version";
    case ErrorCode::kUnknownRule: return "unknown-rule";
    case ErrorCode::kProviderFailure: return "provider-failure";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace catnav
