#include "abc/serialization.hpp"

#include <set>

#include "abc/error.hpp"

namespace abc {

namespace {

template <typename T>
std::vector<T> list_or_empty(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<T>>();
}

std::string string_or_empty(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::string>();
}

std::optional<std::string> optional_string(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

void put_optional(Json& j, const char* key, const std::optional<std::string>& value) {
  if (value) j[key] = *value;
}

void put_nonempty(Json& j, const char* key, const std::string& value) {
  if (!value.empty()) j[key] = value;
}

}  // namespace

void to_json(Json& j, const PartySet& p) { j = p.to_string(); }
void from_json(const Json& j, PartySet& p) { p = PartySet::parse(j.get<std::string>()); }
void to_json(Json& j, const CellCoordinate& c) { j = c.to_string(); }
void from_json(const Json& j, CellCoordinate& c) {
  c = CellCoordinate::parse(j.get<std::string>());
}

void to_json(Json& j, const Role& r) {
  j = Json{{"name", r.name}, {"description", r.description}};
}
void from_json(const Json& j, Role& r) {
  r.name = j.at("name").get<std::string>();
  r.description = string_or_empty(j, "description");
}

void to_json(Json& j, const SecurityRequirement& r) {
  j = Json{{"id", r.id}, {"statement", r.statement}};
  put_nonempty(j, "threat_name", r.threat_name);
}
void from_json(const Json& j, SecurityRequirement& r) {
  r.id = j.at("id").get<std::string>();
  r.statement = j.at("statement").get<std::string>();
  r.threat_name = string_or_empty(j, "threat_name");
}

void to_json(Json& j, const Asset& a) {
  j = Json{{"name", a.name},
           {"kind", std::string(to_string(a.kind))},
           {"description", a.description},
           {"security_requirements", a.security_requirements},
           {"instance_tags", a.instance_tags}};
  put_nonempty(j, "asset_class", a.asset_class);
}
void from_json(const Json& j, Asset& a) {
  a.name = j.at("name").get<std::string>();
  a.kind = j.contains("kind") ? asset_kind_from_string(j.at("kind").get<std::string>())
                              : AssetKind::Concrete;
  a.asset_class = string_or_empty(j, "asset_class");
  a.description = string_or_empty(j, "description");
  a.security_requirements = list_or_empty<SecurityRequirement>(j, "security_requirements");
  a.instance_tags = list_or_empty<std::string>(j, "instance_tags");
}

void to_json(Json& j, const NetworkGraph& g) {
  j = Json{{"nodes", Json::array()}, {"edges", Json::array()}};
  for (const auto& n : g.nodes) {
    j["nodes"].push_back(
        Json{{"id", n.id}, {"label", n.label}, {"node_kind", std::string(to_string(n.kind))}});
  }
  for (const auto& e : g.edges) {
    j["edges"].push_back(Json{{"from", e.from}, {"to", e.to}, {"label", e.label}});
  }
}
void from_json(const Json& j, NetworkGraph& g) {
  g = {};
  if (j.contains("nodes")) {
    for (const auto& n : j.at("nodes")) {
      g.nodes.push_back({n.at("id").get<std::string>(), n.at("label").get<std::string>(),
                         node_kind_from_string(n.at("node_kind").get<std::string>())});
    }
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                         string_or_empty(e, "label")});
    }
  }
}

void to_json(Json& j, const SystemModule& m) {
  j = Json{{"name", m.name},
           {"description", m.description},
           {"asset_refs", m.asset_refs},
           {"network_model", m.network_model}};
}
void from_json(const Json& j, SystemModule& m) {
  m.name = j.at("name").get<std::string>();
  m.description = string_or_empty(j, "description");
  m.asset_refs = list_or_empty<std::string>(j, "asset_refs");
  m.network_model = j.contains("network_model") ? j.at("network_model").get<NetworkGraph>()
                                                : NetworkGraph{};
}

void to_json(Json& j, const ThreatCategory& c) {
  j = Json{{"id", c.id},
           {"asset_ref", c.asset_ref},
           {"name", c.name},
           {"description", c.description},
           {"negates", c.negates},
           {"origin", std::string(to_string(c.origin))}};
  put_optional(j, "instance_tag", c.instance_tag);
  put_nonempty(j, "notes", c.notes);
  put_optional(j, "exclusion", c.exclusion);
}
void from_json(const Json& j, ThreatCategory& c) {
  c.id = string_or_empty(j, "id");
  c.asset_ref = j.at("asset_ref").get<std::string>();
  c.instance_tag = optional_string(j, "instance_tag");
  c.name = j.at("name").get<std::string>();
  c.description = string_or_empty(j, "description");
  c.negates = list_or_empty<std::string>(j, "negates");
  c.origin = j.contains("origin")
                 ? category_origin_from_string(j.at("origin").get<std::string>())
                 : CategoryOrigin::Manual;
  c.notes = string_or_empty(j, "notes");
  c.exclusion = optional_string(j, "exclusion");
}

void to_json(Json& j, const CellResolution& r) {
  j = Json{{"state", std::string(to_string(r.state))}};
  put_nonempty(j, "rationale", r.rationale);
  if (r.merge_target) j["merge_target"] = *r.merge_target;
  if (!r.scenario_refs.empty()) j["scenario_refs"] = r.scenario_refs;
}
void from_json(const Json& j, CellResolution& r) {
  r.state = cell_state_from_string(j.at("state").get<std::string>());
  r.rationale = string_or_empty(j, "rationale");
  r.merge_target = j.contains("merge_target")
                       ? std::optional<CellCoordinate>(j.at("merge_target").get<CellCoordinate>())
                       : std::nullopt;
  r.scenario_refs = list_or_empty<std::string>(j, "scenario_refs");
}

void to_json(Json& j, const CollusionMatrix& m) {
  Json cells = Json::object();
  for (const auto& [coord, res] : m.cells) cells[coord.to_string()] = res;
  j = Json{{"id", m.id},
           {"category_ref", m.category_ref},
           {"role_scope", m.role_scope},
           {"cells", std::move(cells)},
           {"created_at", m.created_at}};
  put_optional(j, "instance_tag", m.instance_tag);
}
void from_json(const Json& j, CollusionMatrix& m) {
  m.id = j.at("id").get<std::string>();
  m.category_ref = j.at("category_ref").get<std::string>();
  m.instance_tag = optional_string(j, "instance_tag");
  m.role_scope = j.at("role_scope").get<std::vector<std::string>>();
  m.created_at = j.value("created_at", std::int64_t{0});
  m.cells.clear();
  for (const auto& [key, value] : j.at("cells").items()) {
    m.cells.emplace(CellCoordinate::parse(key), value.get<CellResolution>());
  }
}

void to_json(Json& j, const SourceCell& s) {
  j = Json{{"matrix_id", s.matrix_id}, {"cell", s.cell}};
}
void from_json(const Json& j, SourceCell& s) {
  s.matrix_id = j.at("matrix_id").get<std::string>();
  s.cell = j.at("cell").get<CellCoordinate>();
}

void to_json(Json& j, const ThreatScenario& s) {
  j = Json{{"id", s.id},
           {"title", s.title},
           {"description", s.description},
           {"attackers", s.attackers.empty() ? Json("") : Json(s.attackers)},
           {"targets", s.targets.empty() ? Json("") : Json(s.targets)},
           {"asset_refs", s.asset_refs},
           {"action_flow", s.action_flow},
           {"preconditions", s.preconditions},
           {"capabilities", s.capabilities},
           {"source_cells", s.source_cells}};
}
void from_json(const Json& j, ThreatScenario& s) {
  auto parties = [&](const char* key) {
    auto text = string_or_empty(j, key);
    return text.empty() ? PartySet{} : PartySet::parse(text);
  };
  s.id = string_or_empty(j, "id");
  s.title = string_or_empty(j, "title");
  s.description = string_or_empty(j, "description");
  s.attackers = parties("attackers");
  s.targets = parties("targets");
  s.asset_refs = list_or_empty<std::string>(j, "asset_refs");
  s.action_flow = list_or_empty<std::string>(j, "action_flow");
  s.preconditions = list_or_empty<std::string>(j, "preconditions");
  s.capabilities = list_or_empty<std::string>(j, "capabilities");
  s.source_cells = list_or_empty<SourceCell>(j, "source_cells");
}

void to_json(Json& j, const RiskScore& s) {
  j = Json{{"scenario_ref", s.scenario_ref},
           {"likelihood", s.likelihood},
           {"severity", s.severity},
           {"score", s.score},
           {"notes", s.notes}};
}
void from_json(const Json& j, RiskScore& s) {
  s.scenario_ref = j.at("scenario_ref").get<std::string>();
  s.likelihood = j.at("likelihood").get<int>();
  s.severity = j.at("severity").get<int>();
  s.score = j.at("score").get<int>();
  s.notes = string_or_empty(j, "notes");
}

void to_json(Json& j, const ThreatModel& m) {
  j = Json{{"name", m.name},
           {"version", m.version},
           {"roles", m.roles},
           {"assets", m.assets},
           {"modules", m.modules},
           {"assumptions", m.assumptions},
           {"dependencies", m.dependencies},
           {"categories", m.categories},
           {"matrices", m.matrices},
           {"scenarios", m.scenarios},
           {"scores", m.scores}};
}
void from_json(const Json& j, ThreatModel& m) {
  m.name = string_or_empty(j, "name");
  m.version = j.value("version", std::int64_t{0});
  m.roles = list_or_empty<Role>(j, "roles");
  m.assets = list_or_empty<Asset>(j, "assets");
  m.modules = list_or_empty<SystemModule>(j, "modules");
  m.assumptions = list_or_empty<std::string>(j, "assumptions");
  m.dependencies = list_or_empty<std::string>(j, "dependencies");
  m.categories = list_or_empty<ThreatCategory>(j, "categories");
  m.matrices = list_or_empty<CollusionMatrix>(j, "matrices");
  m.scenarios = list_or_empty<ThreatScenario>(j, "scenarios");
  m.scores = list_or_empty<RiskScore>(j, "scores");
}

void to_json(Json& j, const CatalogEntry& e) {
  j = Json{{"asset_pattern", e.asset_pattern},
           {"requirement_id", e.requirement_id},
           {"requirement_template", e.requirement_template},
           {"category_name", e.category_name},
           {"category_template", e.category_template}};
  put_nonempty(j, "notes", e.notes);
}
void from_json(const Json& j, CatalogEntry& e) {
  e.asset_pattern = j.at("asset_pattern").get<std::string>();
  e.requirement_id = string_or_empty(j, "requirement_id");
  e.requirement_template = string_or_empty(j, "requirement_template");
  e.category_name = j.at("category_name").get<std::string>();
  e.category_template = string_or_empty(j, "category_template");
  e.notes = string_or_empty(j, "notes");
}

Catalog catalog_from_json(const Json& j) {
  const Json& list = j.is_array() ? j : j.at("catalog");
  Catalog catalog = list.get<Catalog>();
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : catalog) {
    if (!seen.emplace(slugify(e.asset_pattern), e.category_name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate catalog category '" +
                                                  e.category_name + "' for pattern '" +
                                                  e.asset_pattern + "'");
    }
  }
  return catalog;
}

Json catalog_to_json(const Catalog& catalog) {
  return Json{{"schema_version", 1}, {"catalog", catalog}};
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ": " + e.what());
  }
}

}  // namespace abc
