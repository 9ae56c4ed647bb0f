#ifndef BLACKWELL_ERRORS_HPP
#define BLACKWELL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace blackwell {

enum class ErrorCode {
  InvalidArgument,
  EmptyInput,
  NoStrictSeparation,
  PriorNotInterior,
  BarycenterMismatch,
  DimensionMismatch,
  NotAffinelyIndependent,
  TargetOutsideOppositeHull,
  InfeasibleWeights,
  GridMiss,
  WrongDimension,
  PreconditionViolated,
  BudgetExhausted,
  UnknownExample,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blackwell

#endif  // BLACKWELL_ERRORS_HPP
