#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpa {

enum class ErrorCode {
  NonMonotoneBracket,
  InfeasibleBounds,
  DegenerateState,
  CostFree,
  SingularLinearSystem,
  StepTooLarge,
  StepMismatch,
  ExtinctionReached,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Raised by numerical routines when a result cannot be produced for the
/// given (valid) inputs.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A model or economic parameter is outside its admissible domain.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace mpa
