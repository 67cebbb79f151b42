#include "abc/error.hpp"

namespace abc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ReservedName: return "ReservedName";
    case ErrorCode::DuplicateNameConflict: return "DuplicateNameConflict";
    case ErrorCode::ReferencedEntityRemoval: return "ReferencedEntityRemoval";
    case ErrorCode::ModelNotReady: return "ModelNotReady";
    case ErrorCode::MatrixAlreadyGenerated: return "MatrixAlreadyGenerated";
    case ErrorCode::CategoryExcluded: return "CategoryExcluded";
    case ErrorCode::DuplicateMatrixForCategoryInstance:
      return "DuplicateMatrixForCategoryInstance";
    case ErrorCode::EmptyScope: return "EmptyScope";
    case ErrorCode::ScopeTooLarge: return "ScopeTooLarge";
    case ErrorCode::NotUnresolved: return "NotUnresolved";
    case ErrorCode::AlreadyUnresolved: return "AlreadyUnresolved";
    case ErrorCode::EmptyRationale: return "EmptyRationale";
    case ErrorCode::SelfMerge: return "SelfMerge";
    case ErrorCode::MergeIntoEliminated: return "MergeIntoEliminated";
    case ErrorCode::MergeCycle: return "MergeCycle";
    case ErrorCode::EmptyScenarioList: return "EmptyScenarioList";
    case ErrorCode::PartyMismatch: return "PartyMismatch";
    case ErrorCode::ScenarioConflict: return "ScenarioConflict";
    case ErrorCode::MatrixIncomplete: return "MatrixIncomplete";
    case ErrorCode::DanglingMergeChain: return "DanglingMergeChain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::InvalidCellId: return "InvalidCellId";
    case ErrorCode::SchemaTooNew: return "SchemaTooNew";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::VersionConflict: return "VersionConflict";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace abc
