#pragma once

// JSON mapping for every domain type. Objects are nlohmann::json (std::map
// backed), so keys come out sorted; canonical_dump fixes indentation and the
// trailing newline.

#include <string>

#include <nlohmann/json.hpp>

#include "abc/categories.hpp"
#include "abc/model.hpp"

namespace abc {

using Json = nlohmann::json;

void to_json(Json& j, const PartySet& p);
void from_json(const Json& j, PartySet& p);
void to_json(Json& j, const CellCoordinate& c);
void from_json(const Json& j, CellCoordinate& c);

void to_json(Json& j, const Role& r);
void from_json(const Json& j, Role& r);
void to_json(Json& j, const SecurityRequirement& r);
void from_json(const Json& j, SecurityRequirement& r);
void to_json(Json& j, const Asset& a);
void from_json(const Json& j, Asset& a);
void to_json(Json& j, const NetworkGraph& g);
void from_json(const Json& j, NetworkGraph& g);
void to_json(Json& j, const SystemModule& m);
void from_json(const Json& j, SystemModule& m);
void to_json(Json& j, const ThreatCategory& c);
void from_json(const Json& j, ThreatCategory& c);
void to_json(Json& j, const CellResolution& r);
void from_json(const Json& j, CellResolution& r);
void to_json(Json& j, const CollusionMatrix& m);
void from_json(const Json& j, CollusionMatrix& m);
void to_json(Json& j, const SourceCell& s);
void from_json(const Json& j, SourceCell& s);
void to_json(Json& j, const ThreatScenario& s);
void from_json(const Json& j, ThreatScenario& s);
void to_json(Json& j, const RiskScore& s);
void from_json(const Json& j, RiskScore& s);
void to_json(Json& j, const ThreatModel& m);
void from_json(const Json& j, ThreatModel& m);
void to_json(Json& j, const CatalogEntry& e);
void from_json(const Json& j, CatalogEntry& e);

// Catalog files: {"schema_version": 1, "catalog": [...]}; a bare array is
// accepted too.
Catalog catalog_from_json(const Json& j);
Json catalog_to_json(const Catalog& catalog);

// Two-space indentation, sorted keys, UTF-8, LF, trailing newline.
std::string canonical_dump(const Json& j);

// Parses text, converting nlohmann parse errors into Error{ParseError} with a
// line/column position.
Json parse_json_text(const std::string& text);

}  // namespace abc
