#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ossa {

enum class ErrorCode {
  kInvalidInstance,
  kCapacityZero,
  kDemandBoundViolated,
  kPenaltyDominated,
  kNegativeRequest,
  kAccountingMismatch,
  kRhoOutOfRange,
  kEnumerationBudgetExceeded,
  kLambdaOutOfRange,
  kOddN,
  kSupplyTooSmall,
  kUnknownCase,
  kParameterRange,
  kMissingGeo,
  kEmptyInput,
  kNonPositiveDates,
  kMalformedInput,
  kUnknownPolicy,
  kEmptyResults,
  kIo,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// failure class and `what()` names the offending site/step where relevant.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ossa
