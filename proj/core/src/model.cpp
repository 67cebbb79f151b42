#include "abc/model.hpp"

#include <algorithm>

#include "abc/error.hpp"

namespace abc {

namespace {

template <typename Range, typename Pred>
auto find_ptr(const Range& range, Pred pred) -> decltype(&*range.begin()) {
  auto it = std::find_if(range.begin(), range.end(), pred);
  return it == range.end() ? nullptr : &*it;
}

}  // namespace

const Role* ThreatModel::find_role(std::string_view name) const {
  return find_ptr(roles, [&](const Role& r) { return r.name == name; });
}

const Asset* ThreatModel::find_asset(std::string_view name) const {
  return find_ptr(assets, [&](const Asset& a) { return a.name == name; });
}

const ThreatCategory* ThreatModel::find_category(std::string_view id) const {
  return find_ptr(categories, [&](const ThreatCategory& c) { return c.id == id; });
}

const CollusionMatrix* ThreatModel::find_matrix(std::string_view id) const {
  return find_ptr(matrices, [&](const CollusionMatrix& m) { return m.id == id; });
}

const ThreatScenario* ThreatModel::find_scenario(std::string_view id) const {
  return find_ptr(scenarios, [&](const ThreatScenario& s) { return s.id == id; });
}

const RiskScore* ThreatModel::find_score(std::string_view scenario_id) const {
  return find_ptr(scores,
                  [&](const RiskScore& s) { return s.scenario_ref == scenario_id; });
}

std::string_view to_string(AssetKind kind) noexcept {
  return kind == AssetKind::Concrete ? "concrete" : "abstract";
}

std::string_view to_string(NodeKind kind) noexcept {
  return kind == NodeKind::Participant ? "participant" : "asset";
}

std::string_view to_string(CategoryOrigin origin) noexcept {
  switch (origin) {
    case CategoryOrigin::Catalog: return "catalog";
    case CategoryOrigin::Derived: return "derived";
    case CategoryOrigin::Manual: return "manual";
  }
  return "manual";
}

std::string_view to_string(CellState state) noexcept {
  switch (state) {
    case CellState::Unresolved: return "unresolved";
    case CellState::Eliminated: return "eliminated";
    case CellState::Merged: return "merged";
    case CellState::Documented: return "documented";
  }
  return "unresolved";
}

AssetKind asset_kind_from_string(std::string_view text) {
  if (text == "concrete") return AssetKind::Concrete;
  if (text == "abstract") return AssetKind::Abstract;
  throw Error(ErrorCode::InvalidArgument, "unknown asset kind: " + std::string(text));
}

NodeKind node_kind_from_string(std::string_view text) {
  if (text == "participant") return NodeKind::Participant;
  if (text == "asset") return NodeKind::Asset;
  throw Error(ErrorCode::InvalidArgument, "unknown node kind: " + std::string(text));
}

CategoryOrigin category_origin_from_string(std::string_view text) {
  if (text == "catalog") return CategoryOrigin::Catalog;
  if (text == "derived") return CategoryOrigin::Derived;
  if (text == "manual") return CategoryOrigin::Manual;
  throw Error(ErrorCode::InvalidArgument,
              "unknown category origin: " + std::string(text));
}

CellState cell_state_from_string(std::string_view text) {
  if (text == "unresolved") return CellState::Unresolved;
  if (text == "eliminated") return CellState::Eliminated;
  if (text == "merged") return CellState::Merged;
  if (text == "documented") return CellState::Documented;
  throw Error(ErrorCode::InvalidArgument, "unknown cell state: " + std::string(text));
}

}  // namespace abc
