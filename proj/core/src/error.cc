#include "dshap/error.h"

namespace dshap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kMultipleOutputs: return "MultipleOutputs";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kDomainMismatch: return "DomainMismatch";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kValueOutOfDomain: return "ValueOutOfDomain";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotFanin2: return "NotFanin2";
    case ErrorCode::kNotSmooth: return "NotSmooth";
    case ErrorCode::kNonBinaryCircuit: return "NonBinaryCircuit";
    case ErrorCode::kNotDecomposable: return "NotDecomposable";
    case ErrorCode::kDeterminismUnverified: return "DeterminismUnverified";
    case ErrorCode::kNonIntegralResult: return "NonIntegralResult";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEfficiencyViolated: return "EfficiencyViolated";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kConditionAViolated: return "ConditionAViolated";
    case ErrorCode::kParamsOutOfRange: return "ParamsOutOfRange";
    case ErrorCode::kWrongFormulaClass: return "WrongFormulaClass";
    case ErrorCode::kNotFree: return "NotFree";
    case ErrorCode::kDomainCoverageError: return "DomainCoverageError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kForwardReference: return "ForwardReference";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kNotNnfExpressible: return "NotNnfExpressible";
    case ErrorCode::kSumNotOne: return "SumNotOne";
    case ErrorCode::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kBadFraction: return "BadFraction";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t line, const std::string& message)
    : Error(code, line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace dshap
