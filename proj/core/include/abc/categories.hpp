#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "abc/model.hpp"

namespace abc {

struct CatalogEntry {
  // Asset name or class to match ("service", "service-payments", ...);
  // "*" matches every asset. Matching ignores case and treats spaces,
  // underscores and hyphens alike.
  std::string asset_pattern;
  // Requirement id on the matched asset that the category negates; linked
  // only when the asset declares it.
  std::string requirement_id;
  std::string requirement_template;
  std::string category_name;
  std::string category_template;
  std::string notes;

  bool operator==(const CatalogEntry&) const = default;
};

using Catalog = std::vector<CatalogEntry>;

struct CatalogApplication {
  std::vector<ThreatCategory> categories;
  std::vector<std::string> warnings;
};

// Built-in catalog of asset threat categories for cryptocurrency systems.
const Catalog& default_catalog();

// Normalized form used for pattern and id matching: lower case, runs of
// non-alphanumerics collapsed to a single '-'.
std::string slugify(std::string_view text);

std::string category_id_for(std::string_view asset, const std::optional<std::string>& tag,
                            std::string_view name);

// One category per security requirement per instance tag, each negating
// exactly that requirement.
std::vector<ThreatCategory> derive_categories(const Asset& asset);

// Instantiates catalog entries against the model's assets. Entries that match
// no asset become warnings. Categories already present (same asset, tag and
// name) are not repeated.
CatalogApplication apply_catalog(const ThreatModel& model, const Catalog& catalog);

// Step 2 in one transition: apply_catalog, then derive_categories for every
// requirement not yet negated by a category of the same asset instance.
ThreatModel derive_all(const ThreatModel& model, const Catalog& catalog);

ThreatModel add_category(const ThreatModel& model, ThreatCategory category);

ThreatModel mark_category_excluded(const ThreatModel& model, std::string_view category_id,
                                   std::string rationale);

}  // namespace abc
