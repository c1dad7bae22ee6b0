#include "causalkit/error.hpp"

namespace causalkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Cycle: return "CycleError";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::Overlap: return "OverlapError";
    case ErrorCode::NoCausalPath: return "NoCausalPath";
    case ErrorCode::NoValidAdjustmentSet: return "NoValidAdjustmentSet";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::DuplicateHeader: return "DuplicateHeader";
    case ErrorCode::InvalidHeader: return "InvalidHeader";
    case ErrorCode::AllRowsDropped: return "AllRowsDropped";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::NonBinaryTarget: return "NonBinaryTarget";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyTreatmentArm: return "EmptyTreatmentArm";
    case ErrorCode::NonBinaryVariable: return "NonBinaryVariable";
    case ErrorCode::AllStrataDropped: return "AllStrataDropped";
    case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::ResampleExhausted: return "ResampleExhausted";
    case ErrorCode::EmptyReplicates: return "EmptyReplicates";
    case ErrorCode::DegenerateSubset: return "DegenerateSubset";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::InvalidScm: return "InvalidScm";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace causalkit
