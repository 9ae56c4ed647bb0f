#include "blackwell/errors.hpp"

namespace blackwell {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoStrictSeparation: return "NoStrictSeparation";
    case ErrorCode::PriorNotInterior: return "PriorNotInterior";
    case ErrorCode::BarycenterMismatch: return "BarycenterMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotAffinelyIndependent: return "NotAffinelyIndependent";
    case ErrorCode::TargetOutsideOppositeHull: return "TargetOutsideOppositeHull";
    case ErrorCode::InfeasibleWeights: return "InfeasibleWeights";
    case ErrorCode::GridMiss: return "GridMiss";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace blackwell
