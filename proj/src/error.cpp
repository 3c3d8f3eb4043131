#include "splitset/error.hpp"

namespace splitset {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::DegenerateLevels: return "DegenerateLevels";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonpositiveEstimate: return "NonpositiveEstimate";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::BlockTooSmall: return "BlockTooSmall";
    case ErrorCode::BlockTooLarge: return "BlockTooLarge";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateRatio: return "DegenerateRatio";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError:
    case ErrorCode::LevelOutOfRange:
    case ErrorCode::BlockTooSmall:
    case ErrorCode::BlockTooLarge:
      return ErrorCategory::Usage;
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::DegenerateSample:
    case ErrorCode::EmptySide:
    case ErrorCode::TooFewPoints:
    case ErrorCode::DomainError:
      return ErrorCategory::Data;
    case ErrorCode::DegenerateLevels:
    case ErrorCode::NonpositiveEstimate:
    case ErrorCode::SingularDesign:
    case ErrorCode::Unstable:
    case ErrorCode::EmptySet:
    case ErrorCode::DegenerateRatio:
      return ErrorCategory::Numeric;
  }
  return ErrorCategory::Numeric;
}

}  // namespace splitset
