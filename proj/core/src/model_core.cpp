#include "abc/model_core.hpp"

#include <algorithm>
#include <set>

#include "abc/collusion.hpp"
#include "abc/error.hpp"

namespace abc {

namespace {

class IssueSink {
 public:
  explicit IssueSink(ValidationReport& report) : report_(report) {}

  void error(std::string message, std::string location) {
    report_.issues.push_back({Severity::Error, std::move(message), std::move(location)});
  }
  void warning(std::string message, std::string location) {
    report_.issues.push_back({Severity::Warning, std::move(message), std::move(location)});
  }

 private:
  ValidationReport& report_;
};

template <typename T, typename Key>
void check_unique(const std::vector<T>& items, Key key, std::string_view what,
                  std::string_view where, IssueSink& sink) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& k = key(item);
    if (!seen.insert(k).second) {
      sink.error("duplicate " + std::string(what) + " '" + k + "'", std::string(where));
    }
  }
}

void check_roles(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.roles, [](const Role& r) -> const std::string& { return r.name; },
               "role name", "roles", sink);
  for (const auto& role : model.roles) {
    const auto loc = "roles/" + role.name;
    if (role.name == kExternal) {
      sink.error("reserved role name 'external'", loc);
    } else if (!is_valid_role_name(role.name)) {
      sink.error("invalid role name '" + role.name + "'", loc);
    }
  }
}

void check_assets(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.assets, [](const Asset& a) -> const std::string& { return a.name; },
               "asset name", "assets", sink);
  for (const auto& asset : model.assets) {
    const auto loc = "assets/" + asset.name;
    if (asset.name.empty()) sink.error("asset name is empty", loc);
    if (asset.security_requirements.empty()) {
      sink.error("asset has no security requirements", loc);
    }
    check_unique(asset.security_requirements,
                 [](const SecurityRequirement& r) -> const std::string& { return r.id; },
                 "requirement id", loc, sink);
    for (const auto& req : asset.security_requirements) {
      if (req.id.empty()) sink.error("requirement id is empty", loc);
      if (req.statement.empty()) {
        sink.error("requirement statement is empty", loc + "/requirements/" + req.id);
      }
    }
    check_unique(asset.instance_tags, [](const std::string& t) -> const std::string& { return t; },
                 "instance tag", loc, sink);
    for (const auto& tag : asset.instance_tags) {
      if (tag.empty()) sink.error("instance tag is empty", loc);
    }
  }
}

void check_modules(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.modules,
               [](const SystemModule& m) -> const std::string& { return m.name; },
               "module name", "modules", sink);
  for (const auto& module : model.modules) {
    const auto loc = "modules/" + module.name;
    if (module.name.empty()) sink.error("module name is empty", loc);
    for (const auto& ref : module.asset_refs) {
      if (!model.find_asset(ref)) sink.error("unresolved asset reference '" + ref + "'", loc);
    }
    const auto& graph = module.network_model;
    check_unique(graph.nodes, [](const NetworkNode& n) -> const std::string& { return n.id; },
                 "network node id", loc, sink);
    std::set<std::string> ids;
    for (const auto& node : graph.nodes) {
      ids.insert(node.id);
      if (node.kind == NodeKind::Participant && !model.find_role(node.label)) {
        sink.error("network participant '" + node.label + "' is not a declared role",
                   loc + "/network/" + node.id);
      }
    }
    for (const auto& edge : graph.edges) {
      if (!ids.contains(edge.from) || !ids.contains(edge.to)) {
        sink.error("network edge " + edge.from + " -> " + edge.to +
                       " has an unresolved endpoint",
                   loc + "/network");
      }
    }
  }
}

void check_categories(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.categories,
               [](const ThreatCategory& c) -> const std::string& { return c.id; },
               "category id", "categories", sink);
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (const auto& cat : model.categories) {
    const auto loc = "categories/" + cat.id;
    if (cat.name.empty()) sink.error("category name is empty", loc);
    if (!keys.emplace(cat.asset_ref, cat.instance_tag.value_or(""), cat.name).second) {
      sink.error("duplicate category '" + cat.name + "' for asset '" + cat.asset_ref + "'",
                 loc);
    }
    const Asset* asset = model.find_asset(cat.asset_ref);
    if (!asset) {
      sink.error("unresolved asset reference '" + cat.asset_ref + "'", loc);
      continue;
    }
    if (cat.instance_tag) {
      if (std::find(asset->instance_tags.begin(), asset->instance_tags.end(),
                    *cat.instance_tag) == asset->instance_tags.end()) {
        sink.error("unknown instance tag '" + *cat.instance_tag + "'", loc);
      }
    } else if (!asset->instance_tags.empty()) {
      sink.error("category of a multi-instance asset needs an instance tag", loc);
    }
    for (const auto& id : cat.negates) {
      auto it = std::find_if(asset->security_requirements.begin(),
                             asset->security_requirements.end(),
                             [&](const SecurityRequirement& r) { return r.id == id; });
      if (it == asset->security_requirements.end()) {
        sink.error("negated requirement '" + id + "' does not exist on '" + asset->name + "'",
                   loc);
      }
    }
    if (cat.exclusion && cat.exclusion->empty()) {
      sink.error("exclusion without rationale", loc);
    }
  }
}

void check_matrix(const ThreatModel& model, const CollusionMatrix& matrix, IssueSink& sink) {
  const auto loc = "matrices/" + matrix.id;
  const ThreatCategory* cat = model.find_category(matrix.category_ref);
  if (!cat) {
    sink.error("unresolved category reference '" + matrix.category_ref + "'", loc);
  } else {
    if (cat->excluded()) sink.error("matrix exists for an excluded category", loc);
    if (cat->instance_tag != matrix.instance_tag) {
      sink.error("instance tag differs from its category", loc);
    }
  }
  if (matrix.role_scope.empty()) {
    sink.error("empty role scope", loc);
    return;
  }
  if (!std::is_sorted(matrix.role_scope.begin(), matrix.role_scope.end()) ||
      std::adjacent_find(matrix.role_scope.begin(), matrix.role_scope.end()) !=
          matrix.role_scope.end()) {
    sink.error("role scope must be sorted and unique", loc);
  }
  for (const auto& role : matrix.role_scope) {
    if (!model.find_role(role)) sink.error("role scope names unknown role '" + role + "'", loc);
  }
  if (matrix.role_scope.size() > kMaxScope) {
    sink.error("role scope too large", loc);
    return;
  }
  if (matrix.cells.size() != cell_count(matrix.role_scope.size())) {
    sink.error("matrix has " + std::to_string(matrix.cells.size()) + " cells, expected " +
                   std::to_string(cell_count(matrix.role_scope.size())),
               loc);
  }
  const PartySet scope_set(matrix.role_scope, true);
  for (const auto& [coord, res] : matrix.cells) {
    const auto cloc = loc + "/cells/" + coord.to_string();
    if (!coord.attackers.is_subset_of(scope_set) || !coord.targets.is_subset_of(scope_set)) {
      sink.error("cell lies outside the matrix scope", cloc);
    }
    if (coord.targets.includes_external()) sink.error("external party as target", cloc);
    const bool needs_rationale =
        res.state == CellState::Eliminated || res.state == CellState::Merged;
    if (needs_rationale && res.rationale.empty()) sink.error("missing rationale", cloc);
    if (!needs_rationale && !res.rationale.empty()) {
      sink.error("rationale on a cell that is not eliminated or merged", cloc);
    }
    if ((res.state == CellState::Merged) != res.merge_target.has_value()) {
      sink.error("merge target present iff merged", cloc);
    }
    if ((res.state == CellState::Documented) != !res.scenario_refs.empty()) {
      sink.error("scenario links present iff documented", cloc);
    }
    if (res.merge_target) {
      if (*res.merge_target == coord) sink.error("cell merged into itself", cloc);
      if (!matrix.cells.contains(*res.merge_target)) {
        sink.error("merge target outside the matrix", cloc);
      } else if (auto end = merge_terminal(matrix, coord); !end) {
        sink.error("merge cycle", cloc);
      } else if (matrix.cells.at(*end).state == CellState::Eliminated) {
        sink.error("merge chain ends at eliminated cell " + end->to_string(), cloc);
      }
    }
    for (const auto& sid : res.scenario_refs) {
      const ThreatScenario* s = model.find_scenario(sid);
      if (!s) {
        sink.error("unresolved scenario reference '" + sid + "'", cloc);
        continue;
      }
      const SourceCell back{matrix.id, coord};
      if (std::find(s->source_cells.begin(), s->source_cells.end(), back) ==
          s->source_cells.end()) {
        sink.error("scenario '" + sid + "' does not link back to the cell", cloc);
      }
    }
  }
}

void check_matrices(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.matrices,
               [](const CollusionMatrix& m) -> const std::string& { return m.id; },
               "matrix id", "matrices", sink);
  check_unique(model.matrices,
               [](const CollusionMatrix& m) -> const std::string& { return m.category_ref; },
               "matrix for category", "matrices", sink);
  for (const auto& matrix : model.matrices) check_matrix(model, matrix, sink);
}

void check_scenarios(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.scenarios,
               [](const ThreatScenario& s) -> const std::string& { return s.id; },
               "scenario id", "scenarios", sink);
  for (const auto& s : model.scenarios) {
    const auto loc = "scenarios/" + s.id;
    if (s.description.empty()) sink.error("scenario description is empty", loc);
    if (s.action_flow.empty()) sink.error("scenario action flow is empty", loc);
    if (s.attackers.empty() || s.targets.empty()) sink.error("scenario parties are empty", loc);
    if (s.targets.includes_external()) sink.error("external party as target", loc);
    if (s.source_cells.empty()) sink.error("scenario has no source cell", loc);
    for (const auto& ref : s.asset_refs) {
      if (!model.find_asset(ref)) sink.error("unresolved asset reference '" + ref + "'", loc);
    }
    for (const auto& src : s.source_cells) {
      auto documents_scenario = [&] {
        const CollusionMatrix* m = model.find_matrix(src.matrix_id);
        if (!m) return false;
        auto it = m->cells.find(src.cell);
        if (it == m->cells.end() || it->second.state != CellState::Documented) return false;
        const auto& refs = it->second.scenario_refs;
        return std::find(refs.begin(), refs.end(), s.id) != refs.end();
      };
      if (!documents_scenario()) {
        sink.error("source cell " + src.matrix_id + ":" + src.cell.to_string() +
                       " does not document this scenario",
                   loc);
      }
    }
  }
}

void check_scores(const ThreatModel& model, IssueSink& sink) {
  check_unique(model.scores,
               [](const RiskScore& s) -> const std::string& { return s.scenario_ref; },
               "score for scenario", "scores", sink);
  for (const auto& score : model.scores) {
    const auto loc = "scores/" + score.scenario_ref;
    if (!model.find_scenario(score.scenario_ref)) {
      sink.error("score for unknown scenario", loc);
    }
    if (score.likelihood < 1 || score.likelihood > 5 || score.severity < 1 ||
        score.severity > 5) {
      sink.error("score factor outside 1..5", loc);
    }
    if (score.score != score.likelihood * score.severity) {
      sink.error("score differs from likelihood x severity", loc);
    }
  }
}

[[noreturn]] void throw_first_error(const ValidationReport& report) {
  for (const auto& issue : report.issues) {
    if (issue.severity == Severity::Error) {
      throw Error(ErrorCode::InvariantViolation, issue.location + ": " + issue.message);
    }
  }
  throw Error(ErrorCode::InvariantViolation, "model is invalid");
}

ThreatModel checked(ThreatModel model) {
  auto report = validate_model(model);
  if (report.has_errors()) throw_first_error(report);
  return model;
}

bool role_in_use(const ThreatModel& model, std::string_view name) {
  for (const auto& m : model.matrices) {
    if (std::find(m.role_scope.begin(), m.role_scope.end(), name) != m.role_scope.end()) {
      return true;
    }
  }
  for (const auto& s : model.scenarios) {
    if (s.attackers.contains_role(name) || s.targets.contains_role(name)) return true;
  }
  return false;
}

}  // namespace

bool ValidationReport::has_errors() const noexcept { return error_count() > 0; }

std::size_t ValidationReport::error_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      issues.begin(), issues.end(), [](const auto& i) { return i.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const noexcept {
  return issues.size() - error_count();
}

ValidationReport validate_model(const ThreatModel& model) {
  ValidationReport report;
  IssueSink sink(report);
  check_roles(model, sink);
  check_assets(model, sink);
  check_modules(model, sink);
  check_categories(model, sink);
  check_matrices(model, sink);
  check_scenarios(model, sink);
  check_scores(model, sink);
  if (model.assumptions.empty()) sink.warning("no assumptions recorded", "assumptions");
  if (model.dependencies.empty()) sink.warning("no dependencies recorded", "dependencies");
  return report;
}

ThreatModel next_version(const ThreatModel& model) {
  ThreatModel next = model;
  ++next.version;
  return next;
}

ThreatModel init_model(const ThreatModel& model, std::string name) {
  if (!model.name.empty() || !model.roles.empty() || !model.assets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "model is already initialized");
  }
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "model name is empty");
  ThreatModel next = next_version(model);
  next.name = std::move(name);
  return next;
}

ThreatModel upsert_role(const ThreatModel& model, Role role) {
  if (role.name == kExternal) {
    throw Error(ErrorCode::ReservedName, "reserved role name 'external'");
  }
  if (!is_valid_role_name(role.name)) {
    throw Error(ErrorCode::InvalidArgument, "invalid role name '" + role.name + "'");
  }
  ThreatModel next = next_version(model);
  auto it = std::find_if(next.roles.begin(), next.roles.end(),
                         [&](const Role& r) { return r.name == role.name; });
  if (it != next.roles.end()) {
    *it = std::move(role);
  } else {
    next.roles.push_back(std::move(role));
  }
  return checked(std::move(next));
}

ThreatModel remove_role(const ThreatModel& model, std::string_view name) {
  if (!model.find_role(name)) {
    throw Error(ErrorCode::NotFound, "unknown role '" + std::string(name) + "'");
  }
  if (role_in_use(model, name)) {
    throw Error(ErrorCode::ReferencedEntityRemoval,
                "role '" + std::string(name) + "' is referenced by a collusion matrix");
  }
  for (const auto& m : model.modules) {
    for (const auto& n : m.network_model.nodes) {
      if (n.kind == NodeKind::Participant && n.label == name) {
        throw Error(ErrorCode::ReferencedEntityRemoval,
                    "role '" + std::string(name) + "' appears in module '" + m.name + "'");
      }
    }
  }
  ThreatModel next = next_version(model);
  std::erase_if(next.roles, [&](const Role& r) { return r.name == name; });
  return next;
}

ThreatModel upsert_asset(const ThreatModel& model, Asset asset) {
  if (asset.name.empty()) throw Error(ErrorCode::InvalidArgument, "asset name is empty");
  if (asset.security_requirements.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "asset '" + asset.name + "' needs at least one security requirement");
  }
  if (const Asset* existing = model.find_asset(asset.name)) {
    if (existing->kind != asset.kind) {
      throw Error(ErrorCode::DuplicateNameConflict,
                  "asset '" + asset.name + "' already exists as " +
                      std::string(to_string(existing->kind)));
    }
    for (const auto& cat : model.categories) {
      if (cat.asset_ref != asset.name) continue;
      for (const auto& id : cat.negates) {
        bool kept = std::any_of(asset.security_requirements.begin(),
                                asset.security_requirements.end(),
                                [&](const SecurityRequirement& r) { return r.id == id; });
        if (!kept) {
          throw Error(ErrorCode::ReferencedEntityRemoval,
                      "requirement '" + id + "' is negated by category '" + cat.id + "'");
        }
      }
      if (cat.instance_tag &&
          std::find(asset.instance_tags.begin(), asset.instance_tags.end(),
                    *cat.instance_tag) == asset.instance_tags.end()) {
        throw Error(ErrorCode::ReferencedEntityRemoval,
                    "instance tag '" + *cat.instance_tag + "' is used by category '" +
                        cat.id + "'");
      }
      if (!cat.instance_tag && !asset.instance_tags.empty()) {
        throw Error(ErrorCode::ReferencedEntityRemoval,
                    "asset '" + asset.name + "' has untagged categories; cannot add tags");
      }
    }
  }
  ThreatModel next = next_version(model);
  auto it = std::find_if(next.assets.begin(), next.assets.end(),
                         [&](const Asset& a) { return a.name == asset.name; });
  if (it != next.assets.end()) {
    *it = std::move(asset);
  } else {
    next.assets.push_back(std::move(asset));
  }
  return checked(std::move(next));
}

ThreatModel remove_asset(const ThreatModel& model, std::string_view name) {
  if (!model.find_asset(name)) {
    throw Error(ErrorCode::NotFound, "unknown asset '" + std::string(name) + "'");
  }
  for (const auto& cat : model.categories) {
    if (cat.asset_ref == name) {
      throw Error(ErrorCode::ReferencedEntityRemoval,
                  "asset '" + std::string(name) + "' has category '" + cat.id + "'");
    }
  }
  for (const auto& m : model.modules) {
    if (std::find(m.asset_refs.begin(), m.asset_refs.end(), name) != m.asset_refs.end()) {
      throw Error(ErrorCode::ReferencedEntityRemoval,
                  "asset '" + std::string(name) + "' is used by module '" + m.name + "'");
    }
  }
  for (const auto& s : model.scenarios) {
    if (std::find(s.asset_refs.begin(), s.asset_refs.end(), name) != s.asset_refs.end()) {
      throw Error(ErrorCode::ReferencedEntityRemoval,
                  "asset '" + std::string(name) + "' is used by scenario '" + s.id + "'");
    }
  }
  ThreatModel next = next_version(model);
  std::erase_if(next.assets, [&](const Asset& a) { return a.name == name; });
  return next;
}

ThreatModel upsert_module(const ThreatModel& model, SystemModule module) {
  if (module.name.empty()) throw Error(ErrorCode::InvalidArgument, "module name is empty");
  for (const auto& ref : module.asset_refs) {
    if (!model.find_asset(ref)) {
      throw Error(ErrorCode::NotFound, "unresolved asset reference '" + ref + "'");
    }
  }
  ThreatModel next = next_version(model);
  auto it = std::find_if(next.modules.begin(), next.modules.end(),
                         [&](const SystemModule& m) { return m.name == module.name; });
  if (it != next.modules.end()) {
    *it = std::move(module);
  } else {
    next.modules.push_back(std::move(module));
  }
  return checked(std::move(next));
}

ThreatModel add_assumption(const ThreatModel& model, std::string text) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "assumption is empty");
  ThreatModel next = next_version(model);
  next.assumptions.push_back(std::move(text));
  return next;
}

ThreatModel add_dependency(const ThreatModel& model, std::string text) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "dependency is empty");
  ThreatModel next = next_version(model);
  next.dependencies.push_back(std::move(text));
  return next;
}

}  // namespace abc
