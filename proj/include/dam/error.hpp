#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dam {

enum class ErrorCode {
  NonMonotoneCurve,
  EmptyCurve,
  PriceOutOfRange,
  UnknownId,
  InvalidInstance,
  MissingCurve,
  ClearingViolated,
  LinkViolation,
  FlexMultiplicity,
  Infeasible,
  EmptyLossSets,
  IterationLimit,
  TimeLimit,
  TooLarge,
  SchemaError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dam
