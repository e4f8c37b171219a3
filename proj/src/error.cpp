#include "dam/error.hpp"

namespace dam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMonotoneCurve: return "NonMonotoneCurve";
    case ErrorCode::EmptyCurve: return "EmptyCurve";
    case ErrorCode::PriceOutOfRange: return "PriceOutOfRange";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::MissingCurve: return "MissingCurve";
    case ErrorCode::ClearingViolated: return "ClearingViolated";
    case ErrorCode::LinkViolation: return "LinkViolation";
    case ErrorCode::FlexMultiplicity: return "FlexMultiplicity";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::EmptyLossSets: return "EmptyLossSets";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::TimeLimit: return "TimeLimit";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace dam
