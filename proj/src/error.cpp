#include "rmab/error.hpp"

namespace rmab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInstance: return "InvalidInstance";
    case ErrorCode::kUnknownName: return "UnknownName";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kAlphaNNotIntegral: return "AlphaNNotIntegral";
    case ErrorCode::kLpInfeasible: return "LpInfeasible";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kSpectralRadiusTooLarge: return "SpectralRadiusTooLarge";
    case ErrorCode::kBoundaryEigenvalue: return "BoundaryEigenvalue";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kSocpFailure: return "SocpFailure";
    case ErrorCode::kFeasibilityAssertionFailed: return "FeasibilityAssertionFailed";
    case ErrorCode::kBudgetUnreachable: return "BudgetUnreachable";
    case ErrorCode::kNotIndexable: return "NotIndexable";
    case ErrorCode::kValueIterationDivergence: return "ValueIterationDivergence";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kPolicyUnavailable: return "PolicyUnavailable";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLpInfeasible:
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kEigenFailure:
    case ErrorCode::kSpectralRadiusTooLarge:
    case ErrorCode::kBoundaryEigenvalue:
    case ErrorCode::kSocpFailure:
    case ErrorCode::kFeasibilityAssertionFailed:
    case ErrorCode::kBudgetUnreachable:
    case ErrorCode::kValueIterationDivergence:
      return true;
    default:
      return false;
  }
}

}  // namespace rmab
