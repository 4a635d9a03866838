#include "mpa/errors.hpp"

namespace mpa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonMonotoneBracket: return "NonMonotoneBracket";
    case ErrorCode::InfeasibleBounds: return "InfeasibleBounds";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::CostFree: return "CostFree";
    case ErrorCode::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::StepMismatch: return "StepMismatch";
    case ErrorCode::ExtinctionReached: return "ExtinctionReached";
  }
  return "Unknown";
}

NumericalError::NumericalError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

InvalidParameter::InvalidParameter(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

}  // namespace mpa
