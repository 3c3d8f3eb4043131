#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splitset {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  ConfigError,
  IoError,
  DegenerateSample,
  EmptySide,
  DegenerateLevels,
  TooFewPoints,
  NonpositiveEstimate,
  SingularDesign,
  Unstable,
  EmptySet,
  LevelOutOfRange,
  BlockTooSmall,
  BlockTooLarge,
  DomainError,
  DegenerateRatio,
};

// Stable identifier used in machine-readable error lines.
std::string_view error_code_name(ErrorCode code) noexcept;

enum class ErrorCategory { Usage, Data, Numeric };

ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace splitset
