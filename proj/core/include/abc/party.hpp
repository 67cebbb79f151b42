#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace abc {

// Attacker-side pseudo-role for everything outside the system. Never stored
// as a Role and never a target.
inline constexpr std::string_view kExternal = "external";

// Role names are identifiers over [A-Za-z0-9_.-]; "+" and ">" are reserved
// by the cell-id grammar.
bool is_valid_role_name(std::string_view name) noexcept;

// A non-empty set of parties: role names plus the optional external party.
// Roles are kept sorted and unique; the canonical string renders them joined
// by "+" with "external" last.
class PartySet {
 public:
  PartySet() = default;
  PartySet(std::vector<std::string> roles, bool includes_external);

  static PartySet parse(std::string_view text);

  const std::vector<std::string>& roles() const noexcept { return roles_; }
  bool includes_external() const noexcept { return external_; }
  std::size_t size() const noexcept { return roles_.size() + (external_ ? 1 : 0); }
  bool empty() const noexcept { return size() == 0; }

  bool contains_role(std::string_view role) const;
  bool is_subset_of(const PartySet& other) const;

  std::string to_string() const;

  bool operator==(const PartySet&) const = default;
  // Canonical order: by size, role-only before external-containing sets of
  // the same size, then lexicographic over the sorted role names.
  std::strong_ordering operator<=>(const PartySet& other) const;

 private:
  std::vector<std::string> roles_;
  bool external_ = false;
};

// One cell of a collusion matrix. Construction rejects an external target.
struct CellCoordinate {
  PartySet attackers;
  PartySet targets;

  CellCoordinate() = default;
  CellCoordinate(PartySet attackers, PartySet targets);

  // Bit-exact parse of "a+b+external->c+d"; non-canonical spellings are
  // rejected so that parse and to_string are inverse.
  static CellCoordinate parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const CellCoordinate&) const = default;
  std::strong_ordering operator<=>(const CellCoordinate& other) const;
};

}  // namespace abc
