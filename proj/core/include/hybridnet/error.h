#ifndef HYBRIDNET_ERROR_H
#define HYBRIDNET_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridnet {

// Machine-readable failure codes. Every exception thrown by the library
// carries exactly one of these.
enum class ErrorCode {
  kDuplicateLink,
  kNegativeCapacity,
  kSelfLoop,
  kIncompleteReconfigurableSet,
  kNodeOutOfRange,
  kInvalidMatching,
  kFlowUsesUnselectedReconfigurableLink,
  kNonConservedFlow,
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
  kDivisionGuard,
  kNotSingleSource,
  kNotSingleCommodity,
  kNonUniformCapacities,
  kNoRouteForCommodity,
  kInstanceTooLarge,
  kInvalidDegree,
  kGenerationTimeout,
  kParseError,
  kIoError,
  kEmptyRecordSet,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hybridnet

#endif  // HYBRIDNET_ERROR_H
