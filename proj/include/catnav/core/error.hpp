#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catnav {

enum class ErrorCode {
  kDuplicateLabel,
  kRiskOutOfRange,
  kMissingField,
  kInvalidLabel,
  kZeroVector,
  kWrongDimension,
  kNotNormalized,
  kInvalidArgument,
  kSizeMismatch,
  kMissingRisk,
  kSourceMismatch,
  kEmptyInput,
  kParseError,
  kSchemaVersion,
  kUnknownRule,
  kProviderFailure,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every module on contract violations. Carries a stable code
/// so callers can branch without matching on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace catnav
