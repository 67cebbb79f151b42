#include "abc/categories.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "abc/error.hpp"
#include "abc/model_core.hpp"

namespace abc {

namespace {

using CategoryKey = std::tuple<std::string, std::string, std::string>;

CategoryKey key_of(const ThreatCategory& c) {
  return {c.asset_ref, c.instance_tag.value_or(""), c.name};
}

bool pattern_matches(const CatalogEntry& entry, const Asset& asset) {
  if (entry.asset_pattern == "*") return true;
  const auto pattern = slugify(entry.asset_pattern);
  return pattern == slugify(asset.name) ||
         (!asset.asset_class.empty() && pattern == slugify(asset.asset_class));
}

std::vector<std::optional<std::string>> instances_of(const Asset& asset) {
  std::vector<std::optional<std::string>> out;
  if (asset.instance_tags.empty()) {
    out.emplace_back(std::nullopt);
  } else {
    for (const auto& t : asset.instance_tags) out.emplace_back(t);
  }
  return out;
}

std::string unique_id(std::string id, const std::set<std::string>& taken) {
  if (!taken.contains(id)) return id;
  for (int k = 2;; ++k) {
    auto candidate = id + "-" + std::to_string(k);
    if (!taken.contains(candidate)) return candidate;
  }
}

}  // namespace

std::string slugify(std::string_view text) {
  std::string out;
  bool pending_sep = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (pending_sep && !out.empty()) out += '-';
      pending_sep = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

std::string category_id_for(std::string_view asset, const std::optional<std::string>& tag,
                            std::string_view name) {
  std::string id = slugify(asset);
  if (tag) id += "@" + slugify(*tag);
  id += "." + slugify(name);
  return id;
}

std::vector<ThreatCategory> derive_categories(const Asset& asset) {
  std::vector<ThreatCategory> out;
  for (const auto& tag : instances_of(asset)) {
    for (const auto& req : asset.security_requirements) {
      ThreatCategory c;
      c.asset_ref = asset.name;
      c.instance_tag = tag;
      c.name = req.threat_name.empty() ? "violation of " + req.id : req.threat_name;
      c.description = "Violation of requirement: " + req.statement;
      c.negates = {req.id};
      c.origin = CategoryOrigin::Derived;
      c.id = category_id_for(asset.name, tag, c.name);
      out.push_back(std::move(c));
    }
  }
  return out;
}

CatalogApplication apply_catalog(const ThreatModel& model, const Catalog& catalog) {
  auto report = validate_model(model);
  if (report.has_errors()) {
    throw Error(ErrorCode::InvariantViolation,
                "the catalog can only be applied to a model without validation errors");
  }
  CatalogApplication result;
  std::set<CategoryKey> present;
  std::set<std::string> taken_ids;
  for (const auto& c : model.categories) {
    present.insert(key_of(c));
    taken_ids.insert(c.id);
  }
  for (const auto& entry : catalog) {
    bool matched = false;
    for (const auto& asset : model.assets) {
      if (!pattern_matches(entry, asset)) continue;
      matched = true;
      const bool has_requirement = std::any_of(
          asset.security_requirements.begin(), asset.security_requirements.end(),
          [&](const SecurityRequirement& r) { return r.id == entry.requirement_id; });
      for (const auto& tag : instances_of(asset)) {
        ThreatCategory c;
        c.asset_ref = asset.name;
        c.instance_tag = tag;
        c.name = entry.category_name;
        c.description = entry.category_template;
        if (has_requirement) c.negates = {entry.requirement_id};
        c.origin = CategoryOrigin::Catalog;
        c.notes = entry.notes;
        if (!present.insert(key_of(c)).second) continue;
        c.id = unique_id(category_id_for(asset.name, tag, c.name), taken_ids);
        taken_ids.insert(c.id);
        result.categories.push_back(std::move(c));
      }
    }
    if (!matched) {
      result.warnings.push_back("catalog pattern '" + entry.asset_pattern + "' (" +
                                entry.category_name + ") matched no asset");
    }
  }
  return result;
}

ThreatModel derive_all(const ThreatModel& model, const Catalog& catalog) {
  auto applied = apply_catalog(model, catalog);
  ThreatModel next = next_version(model);
  for (auto& c : applied.categories) next.categories.push_back(std::move(c));

  std::set<CategoryKey> present;
  std::set<std::string> taken_ids;
  for (const auto& c : next.categories) {
    present.insert(key_of(c));
    taken_ids.insert(c.id);
  }
  for (const auto& asset : next.assets) {
    for (auto& c : derive_categories(asset)) {
      const bool negated = std::any_of(
          next.categories.begin(), next.categories.end(), [&](const ThreatCategory& e) {
            return e.asset_ref == c.asset_ref && e.instance_tag == c.instance_tag &&
                   std::find(e.negates.begin(), e.negates.end(), c.negates.front()) !=
                       e.negates.end();
          });
      if (negated || !present.insert(key_of(c)).second) continue;
      c.id = unique_id(c.id, taken_ids);
      taken_ids.insert(c.id);
      next.categories.push_back(std::move(c));
    }
  }
  return next;
}

ThreatModel add_category(const ThreatModel& model, ThreatCategory category) {
  if (category.name.empty()) throw Error(ErrorCode::InvalidArgument, "category name is empty");
  if (!model.find_asset(category.asset_ref)) {
    throw Error(ErrorCode::NotFound,
                "unresolved asset reference '" + category.asset_ref + "'");
  }
  for (const auto& c : model.categories) {
    if (key_of(c) == key_of(category)) {
      throw Error(ErrorCode::DuplicateNameConflict,
                  "category '" + category.name + "' already exists as '" + c.id + "'");
    }
  }
  if (category.id.empty()) {
    std::set<std::string> taken;
    for (const auto& c : model.categories) taken.insert(c.id);
    category.id = unique_id(
        category_id_for(category.asset_ref, category.instance_tag, category.name), taken);
  } else if (model.find_category(category.id)) {
    throw Error(ErrorCode::DuplicateNameConflict,
                "category id '" + category.id + "' is taken");
  }
  ThreatModel next = next_version(model);
  next.categories.push_back(std::move(category));
  auto report = validate_model(next);
  for (const auto& issue : report.issues) {
    if (issue.severity == Severity::Error && issue.location.starts_with("categories/")) {
      throw Error(ErrorCode::InvariantViolation, issue.location + ": " + issue.message);
    }
  }
  return next;
}

ThreatModel mark_category_excluded(const ThreatModel& model, std::string_view category_id,
                                   std::string rationale) {
  const ThreatCategory* cat = model.find_category(category_id);
  if (!cat) {
    throw Error(ErrorCode::NotFound, "unknown category '" + std::string(category_id) + "'");
  }
  for (const auto& m : model.matrices) {
    if (m.category_ref == cat->id) {
      throw Error(ErrorCode::MatrixAlreadyGenerated,
                  "category '" + cat->id + "' already has matrix " + m.id);
    }
  }
  if (rationale.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::EmptyRationale, "an exclusion needs a rationale");
  }
  ThreatModel next = next_version(model);
  for (auto& c : next.categories) {
    if (c.id == category_id) c.exclusion = std::move(rationale);
  }
  return next;
}

}  // namespace abc
