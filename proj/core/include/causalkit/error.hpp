#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalkit {

enum class ErrorCode {
  // causal_graph
  Syntax,
  Cycle,
  DuplicateEdge,
  UnknownNode,
  Overlap,
  NoCausalPath,
  NoValidAdjustmentSet,
  GraphTooLarge,
  // dataset
  Io,
  EmptyFile,
  DuplicateHeader,
  InvalidHeader,
  AllRowsDropped,
  UnknownColumn,
  NameCollision,
  EmptyColumn,
  // propensity
  SingularHessian,
  NonBinaryTarget,
  DimensionMismatch,
  // estimators
  EmptyTreatmentArm,
  NonBinaryVariable,
  AllStrataDropped,
  RankDeficientDesign,
  ResampleExhausted,
  // refuters
  EmptyReplicates,
  DegenerateSubset,
  // scm_sim
  UnknownVariable,
  InvalidScm,
  // shared
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code and a
/// one-line message naming the offending node, column, file or value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace causalkit
