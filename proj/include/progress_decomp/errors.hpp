#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace progress {

enum class ErrorCode {
  MissingColumn,
  MalformedValue,
  DomainViolation,
  EmptyDataset,
  NonPositiveForwardFlop,
  UtilizationOutOfRange,
  Unreachable,
  DegenerateSlope,
  NoConvergence,
  EmptyEnsemble,
  AllReplicatesFailed,
  NoImprovement,
  EmptyFrontier,
  HashMismatch,
  UsageError,
};

std::string_view error_code_name(ErrorCode code);

/// Domain error with a stable machine-readable code. The CLI maps these to
/// exit status 1 and a structured error object on stderr.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace progress
