#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "abc/model.hpp"

namespace abc {

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity = Severity::Error;
  std::string message;
  std::string location;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool has_errors() const noexcept;
  std::size_t error_count() const noexcept;
  std::size_t warning_count() const noexcept;
  bool operator==(const ValidationReport&) const = default;
};

// Checks every invariant of the aggregate, including category, matrix,
// scenario and score cross-references. Problems are reported, never thrown.
ValidationReport validate_model(const ThreatModel& model);

// Step 1 editing. Each successful call returns a new snapshot with the
// version incremented by one.
ThreatModel init_model(const ThreatModel& model, std::string name);
ThreatModel upsert_role(const ThreatModel& model, Role role);
ThreatModel remove_role(const ThreatModel& model, std::string_view name);
ThreatModel upsert_asset(const ThreatModel& model, Asset asset);
ThreatModel remove_asset(const ThreatModel& model, std::string_view name);
ThreatModel upsert_module(const ThreatModel& model, SystemModule module);
ThreatModel add_assumption(const ThreatModel& model, std::string text);
ThreatModel add_dependency(const ThreatModel& model, std::string text);

// Copy of `model` with the version bumped; shared by all mutating engines.
ThreatModel next_version(const ThreatModel& model);

}  // namespace abc
