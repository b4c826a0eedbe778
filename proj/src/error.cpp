#include "grademiner/error.hpp"

namespace grademiner {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::DuplicateRoll: return "DuplicateRoll";
    case ErrorCode::UnknownEnumValue: return "UnknownEnumValue";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::GpaOutsideEdges: return "GpaOutsideEdges";
    case ErrorCode::TooFewDistinctPoints: return "TooFewDistinctPoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidAssignmentIndex: return "InvalidAssignmentIndex";
    case ErrorCode::AllZeroCounts: return "AllZeroCounts";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::MissingAttribute: return "MissingAttribute";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace grademiner
