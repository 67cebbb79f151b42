#include "abc/collusion.hpp"

#include <algorithm>
#include <set>

#include "abc/error.hpp"
#include "abc/model_core.hpp"

namespace abc {

namespace {

CollusionMatrix& mutable_matrix(ThreatModel& model, std::string_view matrix_id) {
  for (auto& m : model.matrices) {
    if (m.id == matrix_id) return m;
  }
  throw Error(ErrorCode::NotFound, "unknown matrix '" + std::string(matrix_id) + "'");
}

CellResolution& require_cell(CollusionMatrix& matrix, const CellCoordinate& cell) {
  auto it = matrix.cells.find(cell);
  if (it == matrix.cells.end()) {
    throw Error(ErrorCode::NotFound,
                "cell " + cell.to_string() + " is not in matrix " + matrix.id);
  }
  return it->second;
}

void require_unresolved(const CellResolution& res, const CellCoordinate& cell) {
  if (res.state != CellState::Unresolved) {
    throw Error(ErrorCode::NotUnresolved, "cell " + cell.to_string() + " is already " +
                                              std::string(to_string(res.state)));
  }
}

void require_rationale(const std::string& rationale) {
  if (rationale.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::EmptyRationale, "a rationale is required");
  }
}

std::vector<PartySet> subsets(std::span<const std::string> scope, bool with_external) {
  const std::size_t n = scope.size();
  const std::size_t bits = n + (with_external ? 1 : 0);
  std::vector<PartySet> out;
  out.reserve((std::size_t{1} << bits) - 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << bits); ++mask) {
    std::vector<std::string> roles;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) roles.push_back(scope[i]);
    }
    const bool external = with_external && (mask & (std::uint64_t{1} << n));
    out.emplace_back(std::move(roles), external);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> normalize_scope(const ThreatModel& model,
                                         const std::optional<std::vector<std::string>>& scope) {
  std::vector<std::string> roles;
  if (scope) {
    roles = *scope;
  } else {
    for (const auto& r : model.roles) roles.push_back(r.name);
  }
  std::sort(roles.begin(), roles.end());
  roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
  if (roles.empty()) throw Error(ErrorCode::EmptyScope, "role scope is empty");
  for (const auto& r : roles) {
    if (!model.find_role(r)) throw Error(ErrorCode::NotFound, "unknown role '" + r + "'");
  }
  if (roles.size() > kMaxScope) {
    throw Error(ErrorCode::ScopeTooLarge, "role scope of " + std::to_string(roles.size()) +
                                              " exceeds the limit of " +
                                              std::to_string(kMaxScope));
  }
  return roles;
}

}  // namespace

std::uint64_t cell_count(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cell_count requires n >= 1");
  if (n > 31) throw Error(ErrorCode::OutOfRange, "cell_count overflows for n > 31");
  return ((std::uint64_t{1} << (n + 1)) - 1) * ((std::uint64_t{1} << n) - 1);
}

std::optional<std::string> scope_warning(std::size_t scope_size) {
  if (scope_size <= kLargeScopeWarning) return std::nullopt;
  std::string msg = "scope of " + std::to_string(scope_size) + " roles";
  if (scope_size <= 31) msg += " yields " + std::to_string(cell_count(scope_size)) + " cells";
  return msg;
}

std::vector<PartySet> attacker_sets(std::span<const std::string> scope) {
  return subsets(scope, true);
}

std::vector<PartySet> target_sets(std::span<const std::string> scope) {
  return subsets(scope, false);
}

const CollusionMatrix& require_matrix(const ThreatModel& model, std::string_view matrix_id) {
  if (const auto* m = model.find_matrix(matrix_id)) return *m;
  throw Error(ErrorCode::NotFound, "unknown matrix '" + std::string(matrix_id) + "'");
}

CollusionMatrix generate_matrix(const ThreatModel& model, std::string_view category_id,
                                const std::optional<std::vector<std::string>>& role_scope) {
  if (model.roles.empty() || model.assets.empty()) {
    throw Error(ErrorCode::ModelNotReady,
                "at least one role and one asset are required before matrix generation");
  }
  const ThreatCategory* cat = model.find_category(category_id);
  if (!cat) {
    throw Error(ErrorCode::NotFound, "unknown category '" + std::string(category_id) + "'");
  }
  if (cat->excluded()) {
    throw Error(ErrorCode::CategoryExcluded,
                "category '" + cat->id + "' is excluded: " + *cat->exclusion);
  }
  for (const auto& m : model.matrices) {
    if (m.category_ref == cat->id) {
      throw Error(ErrorCode::DuplicateMatrixForCategoryInstance,
                  "category '" + cat->id + "' already has matrix " + m.id);
    }
  }
  CollusionMatrix matrix;
  matrix.category_ref = cat->id;
  matrix.instance_tag = cat->instance_tag;
  matrix.role_scope = normalize_scope(model, role_scope);
  matrix.created_at = model.version + 1;
  const auto rows = attacker_sets(matrix.role_scope);
  const auto cols = target_sets(matrix.role_scope);
  for (const auto& a : rows) {
    for (const auto& t : cols) matrix.cells.emplace(CellCoordinate(a, t), CellResolution{});
  }
  return matrix;
}

ThreatModel add_matrix(const ThreatModel& model, std::string_view category_id,
                       const std::optional<std::vector<std::string>>& role_scope) {
  CollusionMatrix matrix = generate_matrix(model, category_id, role_scope);
  std::size_t k = model.matrices.size() + 1;
  while (model.find_matrix("m" + std::to_string(k))) ++k;
  matrix.id = "m" + std::to_string(k);
  ThreatModel next = next_version(model);
  next.matrices.push_back(std::move(matrix));
  return next;
}

ThreatModel eliminate_cell(const ThreatModel& model, std::string_view matrix_id,
                           const CellCoordinate& cell, std::string rationale) {
  ThreatModel next = next_version(model);
  CellResolution& res = require_cell(mutable_matrix(next, matrix_id), cell);
  require_unresolved(res, cell);
  require_rationale(rationale);
  for (const auto& [coord, other] : mutable_matrix(next, matrix_id).cells) {
    if (other.merge_target == cell) {
      throw Error(ErrorCode::MergeIntoEliminated,
                  "cell " + cell.to_string() + " is the merge target of " + coord.to_string());
    }
  }
  res.state = CellState::Eliminated;
  res.rationale = std::move(rationale);
  return next;
}

std::optional<CellCoordinate> merge_terminal(const CollusionMatrix& matrix,
                                             const CellCoordinate& cell) {
  CellCoordinate current = cell;
  for (std::size_t steps = 0; steps <= matrix.cells.size(); ++steps) {
    auto it = matrix.cells.find(current);
    if (it == matrix.cells.end()) return std::nullopt;
    if (it->second.state != CellState::Merged || !it->second.merge_target) return current;
    current = *it->second.merge_target;
  }
  return std::nullopt;
}

ThreatModel merge_cell(const ThreatModel& model, std::string_view matrix_id,
                       const CellCoordinate& cell, const CellCoordinate& into,
                       std::string rationale) {
  ThreatModel next = next_version(model);
  CollusionMatrix& matrix = mutable_matrix(next, matrix_id);
  CellResolution& res = require_cell(matrix, cell);
  const CellResolution& target = require_cell(matrix, into);
  if (cell == into) {
    throw Error(ErrorCode::SelfMerge, "cell " + cell.to_string() + " cannot merge into itself");
  }
  require_unresolved(res, cell);
  require_rationale(rationale);
  if (target.state == CellState::Eliminated) {
    throw Error(ErrorCode::MergeIntoEliminated,
                "merge target " + into.to_string() + " is eliminated");
  }
  // Walk the target's chain; reaching the source closes a cycle.
  CellCoordinate current = into;
  for (std::size_t steps = 0; steps <= matrix.cells.size(); ++steps) {
    if (current == cell) {
      throw Error(ErrorCode::MergeCycle, "merging " + cell.to_string() + " into " +
                                             into.to_string() + " creates a cycle");
    }
    const CellResolution& r = matrix.cells.at(current);
    if (r.state != CellState::Merged) {
      if (r.state == CellState::Eliminated) {
        throw Error(ErrorCode::MergeIntoEliminated,
                    "merge chain from " + into.to_string() + " ends at eliminated cell " +
                        current.to_string());
      }
      break;
    }
    current = *r.merge_target;
  }
  res.state = CellState::Merged;
  res.merge_target = into;
  res.rationale = std::move(rationale);
  return next;
}

ThreatModel document_cell(const ThreatModel& model, std::string_view matrix_id,
                          const CellCoordinate& cell, std::vector<ThreatScenario> scenarios) {
  ThreatModel next = next_version(model);
  CollusionMatrix& matrix = mutable_matrix(next, matrix_id);
  CellResolution& res = require_cell(matrix, cell);
  require_unresolved(res, cell);
  if (scenarios.empty()) {
    throw Error(ErrorCode::EmptyScenarioList, "documenting a cell needs at least one scenario");
  }
  const ThreatCategory* cat = next.find_category(matrix.category_ref);
  const PartySet scope_set(matrix.role_scope, true);

  std::vector<std::string> refs;
  std::size_t auto_id = next.scenarios.size() + 1;
  for (auto& s : scenarios) {
    if (s.attackers.empty()) s.attackers = cell.attackers;
    if (s.targets.empty()) s.targets = cell.targets;
    if (s.asset_refs.empty() && cat) s.asset_refs.push_back(cat->asset_ref);
    if (!s.attackers.is_subset_of(scope_set) || !s.targets.is_subset_of(scope_set)) {
      throw Error(ErrorCode::PartyMismatch,
                  "scenario parties " + s.attackers.to_string() + "->" +
                      s.targets.to_string() + " fall outside the matrix scope");
    }
    if (s.targets.includes_external()) {
      throw Error(ErrorCode::PartyMismatch, "an external party cannot be a target");
    }
    if (!s.attackers.is_subset_of(cell.attackers) || !s.targets.is_subset_of(cell.targets)) {
      throw Error(ErrorCode::PartyMismatch,
                  "scenario parties " + s.attackers.to_string() + "->" +
                      s.targets.to_string() + " are not covered by cell " + cell.to_string());
    }
    if (s.description.empty() || s.action_flow.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  "a scenario needs a description and a non-empty action flow");
    }
    for (const auto& a : s.asset_refs) {
      if (!next.find_asset(a)) {
        throw Error(ErrorCode::NotFound, "unresolved asset reference '" + a + "'");
      }
    }
    if (s.id.empty()) {
      while (next.find_scenario("s" + std::to_string(auto_id))) ++auto_id;
      s.id = "s" + std::to_string(auto_id);
    }
    if (std::find(refs.begin(), refs.end(), s.id) != refs.end()) {
      throw Error(ErrorCode::ScenarioConflict, "scenario '" + s.id + "' listed twice");
    }
    const SourceCell src{matrix.id, cell};
    auto existing = std::find_if(next.scenarios.begin(), next.scenarios.end(),
                                 [&](const ThreatScenario& e) { return e.id == s.id; });
    if (existing != next.scenarios.end()) {
      ThreatScenario probe = s;
      probe.source_cells = existing->source_cells;
      if (!(probe == *existing)) {
        throw Error(ErrorCode::ScenarioConflict,
                    "scenario id '" + s.id + "' is already used by a different scenario");
      }
      existing->source_cells.push_back(src);
    } else {
      s.source_cells = {src};
      next.scenarios.push_back(s);
    }
    refs.push_back(s.id);
  }
  res.state = CellState::Documented;
  res.scenario_refs = std::move(refs);
  return next;
}

ThreatModel reopen_cell(const ThreatModel& model, std::string_view matrix_id,
                        const CellCoordinate& cell) {
  ThreatModel next = next_version(model);
  CollusionMatrix& matrix = mutable_matrix(next, matrix_id);
  CellResolution& res = require_cell(matrix, cell);
  if (res.state == CellState::Unresolved) {
    throw Error(ErrorCode::AlreadyUnresolved, "cell " + cell.to_string() + " is unresolved");
  }
  if (res.state == CellState::Documented) {
    const SourceCell src{matrix.id, cell};
    for (auto& s : next.scenarios) std::erase(s.source_cells, src);
    std::set<std::string> dropped;
    for (const auto& s : next.scenarios) {
      if (s.source_cells.empty()) dropped.insert(s.id);
    }
    std::erase_if(next.scenarios, [&](const ThreatScenario& s) { return dropped.contains(s.id); });
    std::erase_if(next.scores,
                  [&](const RiskScore& r) { return dropped.contains(r.scenario_ref); });
  }
  res = CellResolution{};
  return next;
}

Coverage coverage(const CollusionMatrix& matrix) {
  Coverage c;
  c.total = matrix.cells.size();
  for (const auto& [coord, res] : matrix.cells) {
    switch (res.state) {
      case CellState::Unresolved: ++c.unresolved; break;
      case CellState::Eliminated: ++c.eliminated; break;
      case CellState::Merged: ++c.merged; break;
      case CellState::Documented: ++c.documented; break;
    }
  }
  c.fraction_resolved =
      c.total == 0 ? 1.0
                   : 1.0 - static_cast<double>(c.unresolved) / static_cast<double>(c.total);
  return c;
}

std::vector<std::string> documented_scenario_ids(const CollusionMatrix& matrix) {
  std::vector<std::string> ids;
  for (const auto& [coord, res] : matrix.cells) {
    if (res.state != CellState::Documented) continue;
    for (const auto& id : res.scenario_refs) {
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  return ids;
}

std::vector<ThreatScenario> distilled_scenarios(const ThreatModel& model,
                                                std::string_view matrix_id) {
  const CollusionMatrix& matrix = require_matrix(model, matrix_id);
  for (const auto& [coord, res] : matrix.cells) {
    if (res.state == CellState::Unresolved) {
      throw Error(ErrorCode::MatrixIncomplete,
                  "matrix " + matrix.id + " has unresolved cell " + coord.to_string());
    }
  }
  for (const auto& [coord, res] : matrix.cells) {
    if (res.state != CellState::Merged) continue;
    auto end = merge_terminal(matrix, coord);
    if (!end || matrix.cells.at(*end).state != CellState::Documented) {
      throw Error(ErrorCode::DanglingMergeChain,
                  "merge chain from " + coord.to_string() + " does not end at a documented cell");
    }
  }
  std::vector<ThreatScenario> out;
  for (const auto& id : documented_scenario_ids(matrix)) {
    if (const auto* s = model.find_scenario(id)) out.push_back(*s);
  }
  return out;
}

}  // namespace abc
