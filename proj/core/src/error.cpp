#include "ossa/error.hpp"

namespace ossa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInstance: return "InvalidInstance";
    case ErrorCode::kCapacityZero: return "CapacityZero";
    case ErrorCode::kDemandBoundViolated: return "DemandBoundViolated";
    case ErrorCode::kPenaltyDominated: return "PenaltyDominated";
    case ErrorCode::kNegativeRequest: return "NegativeRequest";
    case ErrorCode::kAccountingMismatch: return "AccountingMismatch";
    case ErrorCode::kRhoOutOfRange: return "RhoOutOfRange";
    case ErrorCode::kEnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::kLambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::kOddN: return "OddN";
    case ErrorCode::kSupplyTooSmall: return "SupplyTooSmall";
    case ErrorCode::kUnknownCase: return "UnknownCase";
    case ErrorCode::kParameterRange: return "ParameterRange";
    case ErrorCode::kMissingGeo: return "MissingGeo";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNonPositiveDates: return "NonPositiveDates";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kUnknownPolicy: return "UnknownPolicy";
    case ErrorCode::kEmptyResults: return "EmptyResults";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace ossa
