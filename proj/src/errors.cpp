#include "progress_decomp/errors.hpp"

namespace progress {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedValue: return "MalformedValue";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NonPositiveForwardFlop: return "NonPositiveForwardFlop";
    case ErrorCode::UtilizationOutOfRange: return "UtilizationOutOfRange";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::DegenerateSlope: return "DegenerateSlope";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::AllReplicatesFailed: return "AllReplicatesFailed";
    case ErrorCode::NoImprovement: return "NoImprovement";
    case ErrorCode::EmptyFrontier: return "EmptyFrontier";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace progress
