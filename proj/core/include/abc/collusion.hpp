#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abc/model.hpp"

namespace abc {

// Scopes above this size still generate but callers should warn: the matrix
// has about two million cells at 10 roles.
inline constexpr std::size_t kLargeScopeWarning = 10;
inline constexpr std::size_t kMaxScope = 12;

// (2^(n+1) - 1) * (2^n - 1): non-empty subsets of roles plus external on the
// attacker axis times non-empty subsets of roles on the target axis.
std::uint64_t cell_count(std::uint64_t n);

// Warning text for scopes above kLargeScopeWarning, else nullopt.
std::optional<std::string> scope_warning(std::size_t scope_size);

// Canonical row / column orders for a sorted role scope.
std::vector<PartySet> attacker_sets(std::span<const std::string> scope);
std::vector<PartySet> target_sets(std::span<const std::string> scope);

// Builds (does not register) the matrix for an included category. The scope
// defaults to every role in the model.
CollusionMatrix generate_matrix(const ThreatModel& model, std::string_view category_id,
                                const std::optional<std::vector<std::string>>& role_scope = {});

// generate_matrix plus registration under the next free "m<k>" id.
ThreatModel add_matrix(const ThreatModel& model, std::string_view category_id,
                       const std::optional<std::vector<std::string>>& role_scope = {});

// A cell that other cells are merged into cannot be eliminated
// (MergeIntoEliminated): the merged threats would be left uncovered.
ThreatModel eliminate_cell(const ThreatModel& model, std::string_view matrix_id,
                           const CellCoordinate& cell, std::string rationale);

ThreatModel merge_cell(const ThreatModel& model, std::string_view matrix_id,
                       const CellCoordinate& cell, const CellCoordinate& into,
                       std::string rationale);

// Registers the scenarios (new ids, or existing ids with identical content)
// and marks the cell documented. Empty attacker / target sets default to the
// cell's own parties; empty asset lists default to the category's asset.
ThreatModel document_cell(const ThreatModel& model, std::string_view matrix_id,
                          const CellCoordinate& cell, std::vector<ThreatScenario> scenarios);

// Returns a resolved cell to unresolved. Scenarios lose the link to this
// cell; scenarios left without any source cell are dropped with their score.
ThreatModel reopen_cell(const ThreatModel& model, std::string_view matrix_id,
                        const CellCoordinate& cell);

struct Coverage {
  std::uint64_t total = 0;
  std::uint64_t unresolved = 0;
  std::uint64_t eliminated = 0;
  std::uint64_t merged = 0;
  std::uint64_t documented = 0;
  double fraction_resolved = 0.0;

  bool operator==(const Coverage&) const = default;
};

Coverage coverage(const CollusionMatrix& matrix);

// Follows merge_target links from `cell`. Returns the first non-merged cell,
// or nullopt when the chain cycles or leaves the matrix.
std::optional<CellCoordinate> merge_terminal(const CollusionMatrix& matrix,
                                             const CellCoordinate& cell);

// Scenarios carried by a fully resolved matrix, deduplicated by id, in
// canonical cell order.
std::vector<ThreatScenario> distilled_scenarios(const ThreatModel& model,
                                                std::string_view matrix_id);

// Scenario ids referenced by documented cells of `matrix`, no completeness
// requirement.
std::vector<std::string> documented_scenario_ids(const CollusionMatrix& matrix);

const CollusionMatrix& require_matrix(const ThreatModel& model, std::string_view matrix_id);

}  // namespace abc
