#include "abc/party.hpp"

#include <algorithm>

#include "abc/error.hpp"

namespace abc {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

bool is_valid_role_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
  });
}

PartySet::PartySet(std::vector<std::string> roles, bool includes_external)
    : roles_(std::move(roles)), external_(includes_external) {
  std::sort(roles_.begin(), roles_.end());
  roles_.erase(std::unique(roles_.begin(), roles_.end()), roles_.end());
  for (const auto& r : roles_) {
    if (r == kExternal) {
      throw Error(ErrorCode::ReservedName,
                  "\"external\" is a pseudo-role; use the external flag");
    }
    if (!is_valid_role_name(r)) {
      throw Error(ErrorCode::InvalidArgument, "invalid role name: '" + r + "'");
    }
  }
}

PartySet PartySet::parse(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorCode::InvalidCellId, "empty party set");
  }
  std::vector<std::string> roles;
  bool external = false;
  for (auto part : split(text, '+')) {
    if (part.empty()) {
      throw Error(ErrorCode::InvalidCellId,
                  "empty party name in '" + std::string(text) + "'");
    }
    if (part == kExternal) {
      if (external) {
        throw Error(ErrorCode::InvalidCellId, "duplicate external party");
      }
      external = true;
      continue;
    }
    if (external) {
      throw Error(ErrorCode::InvalidCellId,
                  "external must be rendered last in '" + std::string(text) + "'");
    }
    if (!is_valid_role_name(part)) {
      throw Error(ErrorCode::InvalidCellId,
                  "invalid role name '" + std::string(part) + "'");
    }
    roles.emplace_back(part);
  }
  if (!std::is_sorted(roles.begin(), roles.end()) ||
      std::adjacent_find(roles.begin(), roles.end()) != roles.end()) {
    throw Error(ErrorCode::InvalidCellId,
                "roles must be sorted and unique in '" + std::string(text) + "'");
  }
  return PartySet(std::move(roles), external);
}

bool PartySet::contains_role(std::string_view role) const {
  return std::binary_search(roles_.begin(), roles_.end(), role);
}

bool PartySet::is_subset_of(const PartySet& other) const {
  if (external_ && !other.external_) return false;
  return std::includes(other.roles_.begin(), other.roles_.end(),
                       roles_.begin(), roles_.end());
}

std::string PartySet::to_string() const {
  std::string out;
  for (const auto& r : roles_) {
    if (!out.empty()) out += '+';
    out += r;
  }
  if (external_) {
    if (!out.empty()) out += '+';
    out += kExternal;
  }
  return out;
}

std::strong_ordering PartySet::operator<=>(const PartySet& other) const {
  if (auto c = size() <=> other.size(); c != 0) return c;
  if (auto c = external_ <=> other.external_; c != 0) return c;
  return roles_ <=> other.roles_;
}

CellCoordinate::CellCoordinate(PartySet a, PartySet t)
    : attackers(std::move(a)), targets(std::move(t)) {
  if (attackers.empty() || targets.empty()) {
    throw Error(ErrorCode::InvalidCellId, "attackers and targets must be non-empty");
  }
  if (targets.includes_external()) {
    throw Error(ErrorCode::InvariantViolation,
                "an external party cannot be a target");
  }
}

CellCoordinate CellCoordinate::parse(std::string_view text) {
  auto arrow = text.find("->");
  if (arrow == std::string_view::npos ||
      text.find("->", arrow + 2) != std::string_view::npos) {
    throw Error(ErrorCode::InvalidCellId,
                "cell id must contain exactly one '->': '" + std::string(text) + "'");
  }
  return CellCoordinate(PartySet::parse(text.substr(0, arrow)),
                        PartySet::parse(text.substr(arrow + 2)));
}

std::string CellCoordinate::to_string() const {
  return attackers.to_string() + "->" + targets.to_string();
}

std::strong_ordering CellCoordinate::operator<=>(const CellCoordinate& other) const {
  if (auto c = attackers <=> other.attackers; c != 0) return c;
  return targets <=> other.targets;
}

}  // namespace abc
