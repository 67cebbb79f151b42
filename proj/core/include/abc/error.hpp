#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abc {

enum class ErrorCode {
  NotFound,
  InvalidArgument,
  ReservedName,
  DuplicateNameConflict,
  ReferencedEntityRemoval,
  ModelNotReady,
  MatrixAlreadyGenerated,
  CategoryExcluded,
  DuplicateMatrixForCategoryInstance,
  EmptyScope,
  ScopeTooLarge,
  NotUnresolved,
  AlreadyUnresolved,
  EmptyRationale,
  SelfMerge,
  MergeIntoEliminated,
  MergeCycle,
  EmptyScenarioList,
  PartyMismatch,
  ScenarioConflict,
  MatrixIncomplete,
  DanglingMergeChain,
  OutOfRange,
  UnknownScenario,
  InvalidCellId,
  SchemaTooNew,
  ParseError,
  InvariantViolation,
  VersionConflict,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every engine failure is reported through this exception; the code is the
// stable, machine-readable part, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace abc
