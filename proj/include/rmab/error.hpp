#pragma once

#include <stdexcept>
#include <string>

namespace rmab {

enum class ErrorCode {
  kInvalidInstance,
  kUnknownName,
  kOutOfRange,
  kAlphaNNotIntegral,
  kLpInfeasible,
  kNumericalFailure,
  kEigenFailure,
  kSpectralRadiusTooLarge,
  kBoundaryEigenvalue,
  kDegenerate,
  kSocpFailure,
  kFeasibilityAssertionFailed,
  kBudgetUnreachable,
  kNotIndexable,
  kValueIterationDivergence,
  kStateSpaceTooLarge,
  kPolicyUnavailable,
};

const char* error_code_name(ErrorCode code);

// True for codes that come from a numerical routine rather than bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rmab
