#ifndef COSKIT_ERRORS_HPP
#define COSKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coskit {

enum class ErrorCode {
  // ingestion / dataset validation
  DanglingClusterRef,
  DuplicateClusterId,
  InconsistentSchema,
  EmptyCluster,
  MissingValue,
  BadHeader,
  BadNumericField,
  IoFailure,
  // aggregates
  BadQuantileLevel,
  MissingClusterRow,
  // estimation
  MissingAggregates,
  NoRows,
  OneArmEmpty,
  StageOrderViolation,
  TooManyDegenerateReplicates,
  ZeroPooledSD,
  // cli
  UsageError,
  Internal,
};

// Process exit codes, also used to bucket errors for reporting.
enum class ErrorCategory : int {
  Usage = 2,
  Ingestion = 3,
  Estimation = 4,
  Internal = 5,
};

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::DanglingClusterRef:
    case ErrorCode::DuplicateClusterId:
    case ErrorCode::InconsistentSchema:
    case ErrorCode::EmptyCluster:
    case ErrorCode::MissingValue:
    case ErrorCode::BadHeader:
    case ErrorCode::BadNumericField:
    case ErrorCode::IoFailure:
      return ErrorCategory::Ingestion;
    case ErrorCode::BadQuantileLevel:
    case ErrorCode::MissingClusterRow:
    case ErrorCode::MissingAggregates:
    case ErrorCode::NoRows:
    case ErrorCode::OneArmEmpty:
    case ErrorCode::StageOrderViolation:
    case ErrorCode::TooManyDegenerateReplicates:
    case ErrorCode::ZeroPooledSD:
      return ErrorCategory::Estimation;
    case ErrorCode::UsageError:
      return ErrorCategory::Usage;
    case ErrorCode::Internal:
      return ErrorCategory::Internal;
  }
  return ErrorCategory::Internal;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace coskit

#endif  // COSKIT_ERRORS_HPP
