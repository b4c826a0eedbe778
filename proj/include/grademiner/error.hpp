#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grademiner {

enum class ErrorCode {
  // ingestion / validation
  EmptyDataset,
  MalformedRow,
  RangeViolation,
  DuplicateRoll,
  UnknownEnumValue,
  InvalidSpec,
  OutOfRange,
  GpaOutsideEdges,
  // clustering
  TooFewDistinctPoints,
  DimensionMismatch,
  InvalidAssignmentIndex,
  // tree
  AllZeroCounts,
  UnknownAttribute,
  EmptyTrainingSet,
  MissingAttribute,
  MalformedTree,
  // advisor
  UnknownLetter,
  AllZero,
  // pipeline
  InvalidConfig,
  Io,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace grademiner
