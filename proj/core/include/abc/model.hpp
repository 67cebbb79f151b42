#pragma once

// Value types of the threat-model aggregate. Everything here is a plain
// value; operations live in the engine headers and return new snapshots.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abc/party.hpp"

namespace abc {

struct Role {
  std::string name;
  std::string description;

  bool operator==(const Role&) const = default;
};

enum class AssetKind { Concrete, Abstract };

struct SecurityRequirement {
  std::string id;
  std::string statement;
  // Analyst-chosen short name for the violation ("service theft"); used as
  // the derived category name when present.
  std::string threat_name;

  bool operator==(const SecurityRequirement&) const = default;
};

struct Asset {
  std::string name;
  AssetKind kind = AssetKind::Concrete;
  // Declared class for catalog matching (e.g. "service"); empty if none.
  std::string asset_class;
  std::string description;
  std::vector<SecurityRequirement> security_requirements;
  std::vector<std::string> instance_tags;

  bool operator==(const Asset&) const = default;
};

enum class NodeKind { Participant, Asset };

struct NetworkNode {
  std::string id;
  std::string label;
  NodeKind kind = NodeKind::Participant;

  bool operator==(const NetworkNode&) const = default;
};

struct NetworkEdge {
  std::string from;
  std::string to;
  std::string label;

  bool operator==(const NetworkEdge&) const = default;
};

struct NetworkGraph {
  std::vector<NetworkNode> nodes;
  std::vector<NetworkEdge> edges;

  bool operator==(const NetworkGraph&) const = default;
};

struct SystemModule {
  std::string name;
  std::string description;
  std::vector<std::string> asset_refs;
  NetworkGraph network_model;

  bool operator==(const SystemModule&) const = default;
};

enum class CategoryOrigin { Catalog, Derived, Manual };

struct ThreatCategory {
  std::string id;
  std::string asset_ref;
  std::optional<std::string> instance_tag;
  std::string name;
  std::string description;
  std::vector<std::string> negates;
  CategoryOrigin origin = CategoryOrigin::Manual;
  std::string notes;
  // Present iff the category was excluded; holds the rationale.
  std::optional<std::string> exclusion;

  bool excluded() const noexcept { return exclusion.has_value(); }
  bool operator==(const ThreatCategory&) const = default;
};

enum class CellState { Unresolved, Eliminated, Merged, Documented };

struct CellResolution {
  CellState state = CellState::Unresolved;
  std::string rationale;                       // eliminated, merged
  std::optional<CellCoordinate> merge_target;  // merged
  std::vector<std::string> scenario_refs;      // documented

  bool operator==(const CellResolution&) const = default;
};

struct CollusionMatrix {
  std::string id;
  std::string category_ref;
  std::optional<std::string> instance_tag;
  std::vector<std::string> role_scope;  // sorted, unique
  std::map<CellCoordinate, CellResolution> cells;
  std::int64_t created_at = 0;

  bool operator==(const CollusionMatrix&) const = default;
};

struct SourceCell {
  std::string matrix_id;
  CellCoordinate cell;

  bool operator==(const SourceCell&) const = default;
};

struct ThreatScenario {
  std::string id;
  std::string title;
  std::string description;
  PartySet attackers;
  PartySet targets;
  std::vector<std::string> asset_refs;
  std::vector<std::string> action_flow;
  std::vector<std::string> preconditions;
  std::vector<std::string> capabilities;
  std::vector<SourceCell> source_cells;

  bool operator==(const ThreatScenario&) const = default;
};

struct RiskScore {
  std::string scenario_ref;
  int likelihood = 1;
  int severity = 1;
  int score = 1;
  std::string notes;

  bool operator==(const RiskScore&) const = default;
};

struct ThreatModel {
  std::string name;
  std::int64_t version = 0;
  std::vector<Role> roles;
  std::vector<Asset> assets;
  std::vector<SystemModule> modules;
  std::vector<std::string> assumptions;
  std::vector<std::string> dependencies;
  std::vector<ThreatCategory> categories;
  std::vector<CollusionMatrix> matrices;
  std::vector<ThreatScenario> scenarios;
  std::vector<RiskScore> scores;

  bool operator==(const ThreatModel&) const = default;

  const Role* find_role(std::string_view name) const;
  const Asset* find_asset(std::string_view name) const;
  const ThreatCategory* find_category(std::string_view id) const;
  const CollusionMatrix* find_matrix(std::string_view id) const;
  const ThreatScenario* find_scenario(std::string_view id) const;
  const RiskScore* find_score(std::string_view scenario_id) const;
};

std::string_view to_string(AssetKind kind) noexcept;
std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(CategoryOrigin origin) noexcept;
std::string_view to_string(CellState state) noexcept;

AssetKind asset_kind_from_string(std::string_view text);
NodeKind node_kind_from_string(std::string_view text);
CategoryOrigin category_origin_from_string(std::string_view text);
CellState cell_state_from_string(std::string_view text);

}  // namespace abc
