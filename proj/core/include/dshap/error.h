#ifndef DSHAP_ERROR_H_
#define DSHAP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dshap {

enum class ErrorCode {
  // circuit construction and conditioning
  kCycleDetected,
  kMultipleOutputs,
  kDanglingReference,
  kDuplicateEdge,
  kDomainMismatch,
  kUnknownFeature,
  kValueOutOfDomain,
  kInvalidArgument,
  // transforms
  kNotFanin2,
  kNotSmooth,
  kNonBinaryCircuit,
  // engine
  kNotDecomposable,
  kDeterminismUnverified,
  kNonIntegralResult,
  kIndexOutOfRange,
  kEfficiencyViolated,
  // oracle
  kTooLarge,
  // formulas
  kConditionAViolated,
  kParamsOutOfRange,
  kWrongFormulaClass,
  // encoders
  kNotFree,
  kDomainCoverageError,
  // io
  kParseError,
  kForwardReference,
  kEmptyDocument,
  kNotNnfExpressible,
  kSumNotOne,
  kProbabilityOutOfRange,
  kMissingFeature,
  kBadFraction,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry the 1-based line they were raised on (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dshap

#endif  // DSHAP_ERROR_H_
