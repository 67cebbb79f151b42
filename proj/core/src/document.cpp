#include "abc/document.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "abc/categories.hpp"
#include "abc/collusion.hpp"
#include "abc/error.hpp"
#include "abc/model_core.hpp"
#include "abc/risk.hpp"

namespace abc {

namespace {

using Handler = std::function<ThreatModel(const ThreatModel&, const Json&)>;

std::string str_arg(const Json& args, const char* key) {
  if (!args.contains(key) || !args.at(key).is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing string argument '") + key + "'");
  }
  return args.at(key).get<std::string>();
}

std::string str_arg_or(const Json& args, const char* key, std::string fallback) {
  return args.contains(key) ? str_arg(args, key) : fallback;
}

int int_arg(const Json& args, const char* key) {
  if (!args.contains(key) || !args.at(key).is_number_integer()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("missing integer argument '") + key + "'");
  }
  return args.at(key).get<int>();
}

template <typename T>
T object_arg(const Json& args, const char* key) {
  if (!args.contains(key) || !args.at(key).is_object()) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing object argument '") + key + "'");
  }
  return args.at(key).get<T>();
}

CellCoordinate cell_arg(const Json& args, const char* key) {
  return CellCoordinate::parse(str_arg(args, key));
}

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table = {
      {"init", [](const ThreatModel& m, const Json& a) { return init_model(m, str_arg(a, "name")); }},
      {"upsert_role",
       [](const ThreatModel& m, const Json& a) { return upsert_role(m, object_arg<Role>(a, "role")); }},
      {"remove_role",
       [](const ThreatModel& m, const Json& a) { return remove_role(m, str_arg(a, "name")); }},
      {"upsert_asset",
       [](const ThreatModel& m, const Json& a) { return upsert_asset(m, object_arg<Asset>(a, "asset")); }},
      {"remove_asset",
       [](const ThreatModel& m, const Json& a) { return remove_asset(m, str_arg(a, "name")); }},
      {"upsert_module",
       [](const ThreatModel& m, const Json& a) {
         return upsert_module(m, object_arg<SystemModule>(a, "module"));
       }},
      {"add_assumption",
       [](const ThreatModel& m, const Json& a) { return add_assumption(m, str_arg(a, "text")); }},
      {"add_dependency",
       [](const ThreatModel& m, const Json& a) { return add_dependency(m, str_arg(a, "text")); }},
      {"derive",
       [](const ThreatModel& m, const Json& a) {
         const Catalog catalog =
             a.contains("catalog") ? catalog_from_json(a.at("catalog")) : default_catalog();
         return derive_all(m, catalog);
       }},
      {"add_category",
       [](const ThreatModel& m, const Json& a) {
         return add_category(m, object_arg<ThreatCategory>(a, "category"));
       }},
      {"exclude_category",
       [](const ThreatModel& m, const Json& a) {
         return mark_category_excluded(m, str_arg(a, "category_id"), str_arg(a, "rationale"));
       }},
      {"generate_matrix",
       [](const ThreatModel& m, const Json& a) {
         std::optional<std::vector<std::string>> scope;
         if (a.contains("scope") && !a.at("scope").is_null()) {
           scope = a.at("scope").get<std::vector<std::string>>();
           if (scope->empty()) throw Error(ErrorCode::EmptyScope, "role scope is empty");
         }
         return add_matrix(m, str_arg(a, "category_id"), scope);
       }},
      {"eliminate",
       [](const ThreatModel& m, const Json& a) {
         return eliminate_cell(m, str_arg(a, "matrix_id"), cell_arg(a, "cell"),
                               str_arg_or(a, "rationale", ""));
       }},
      {"merge",
       [](const ThreatModel& m, const Json& a) {
         return merge_cell(m, str_arg(a, "matrix_id"), cell_arg(a, "cell"), cell_arg(a, "into"),
                           str_arg_or(a, "rationale", ""));
       }},
      {"document",
       [](const ThreatModel& m, const Json& a) {
         std::vector<ThreatScenario> scenarios;
         if (a.contains("scenarios")) scenarios = a.at("scenarios").get<std::vector<ThreatScenario>>();
         return document_cell(m, str_arg(a, "matrix_id"), cell_arg(a, "cell"), std::move(scenarios));
       }},
      {"reopen",
       [](const ThreatModel& m, const Json& a) {
         return reopen_cell(m, str_arg(a, "matrix_id"), cell_arg(a, "cell"));
       }},
      {"score",
       [](const ThreatModel& m, const Json& a) {
         return score_scenario(m, str_arg(a, "scenario_id"), int_arg(a, "likelihood"),
                               int_arg(a, "severity"), str_arg_or(a, "notes", ""));
       }},
  };
  return table;
}

AuditEntry audit_from_json(const Json& j) {
  AuditEntry e;
  e.timestamp = j.value("timestamp", std::string{});
  e.op = j.at("op").get<std::string>();
  e.args = j.contains("args") ? j.at("args") : Json::object();
  e.version = j.at("version").get<std::int64_t>();
  return e;
}

Json audit_to_json(const AuditEntry& e) {
  return Json{{"timestamp", e.timestamp}, {"op", e.op}, {"args", e.args}, {"version", e.version}};
}

}  // namespace

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, handler] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

ThreatModel apply_operation(const ThreatModel& model, const Operation& op) {
  auto it = handlers().find(op.name);
  if (it == handlers().end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown operation '" + op.name + "'");
  }
  if (!op.args.is_object()) {
    throw Error(ErrorCode::InvalidArgument, "operation arguments must be an object");
  }
  try {
    return it->second(model, op.args);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, op.name + ": malformed arguments: " + e.what());
  }
}

ModelDocument record(const ModelDocument& doc, const Operation& op, std::string timestamp) {
  Operation logged = op;
  // Pin the catalog into the log so replay does not depend on the built-in one.
  if (logged.name == "derive" && logged.args.is_object() && !logged.args.contains("catalog")) {
    logged.args["catalog"] = catalog_to_json(default_catalog());
  }
  ModelDocument next = doc;
  next.model = apply_operation(doc.model, logged);
  next.audit_log.push_back({std::move(timestamp), logged.name, logged.args, next.model.version});
  return next;
}

ThreatModel replay(std::span<const AuditEntry> log) {
  ThreatModel model;
  for (const auto& entry : log) model = apply_operation(model, {entry.op, entry.args});
  return model;
}

void verify_document(const ModelDocument& doc) {
  for (std::size_t i = 0; i < doc.audit_log.size(); ++i) {
    if (doc.audit_log[i].version != static_cast<std::int64_t>(i + 1)) {
      throw Error(ErrorCode::InvariantViolation,
                  "audit log entry " + std::to_string(i + 1) + " records version " +
                      std::to_string(doc.audit_log[i].version));
    }
  }
  ThreatModel replayed;
  try {
    replayed = replay(doc.audit_log);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("audit log does not replay: ") + e.what());
  }
  if (!(replayed == doc.model)) {
    throw Error(ErrorCode::InvariantViolation, "audit log replay does not reproduce the model");
  }
}

Json document_to_json(const ModelDocument& doc) {
  Json log = Json::array();
  for (const auto& e : doc.audit_log) log.push_back(audit_to_json(e));
  return Json{{"schema_version", doc.schema_version}, {"model", doc.model}, {"audit_log", log}};
}

ModelDocument document_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw Error(ErrorCode::ParseError, "not a model document: missing schema_version");
  }
  ModelDocument doc;
  doc.schema_version = j.at("schema_version").get<int>();
  if (doc.schema_version > kSchemaVersion) {
    throw Error(ErrorCode::SchemaTooNew,
                "document schema " + std::to_string(doc.schema_version) +
                    " is newer than supported schema " + std::to_string(kSchemaVersion));
  }
  try {
    doc.model = j.at("model").get<ThreatModel>();
    if (j.contains("audit_log")) {
      for (const auto& e : j.at("audit_log")) doc.audit_log.push_back(audit_from_json(e));
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, e.what());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schema mismatch: ") + e.what());
  }
  return doc;
}

std::string serialize_document(const ModelDocument& doc) {
  return canonical_dump(document_to_json(doc));
}

ModelDocument parse_document(const std::string& text) {
  ModelDocument doc = document_from_json(parse_json_text(text));
  const auto report = validate_model(doc.model);
  for (const auto& issue : report.issues) {
    if (issue.severity == Severity::Error) {
      throw Error(ErrorCode::InvariantViolation, issue.location + ": " + issue.message);
    }
  }
  verify_document(doc);
  return doc;
}

void save(const ModelDocument& doc, const std::filesystem::path& path) {
  verify_document(doc);
  const std::string text = serialize_document(doc);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

ModelDocument load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

std::vector<Operation> operations_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    if (j.contains("operations")) {
      list = &j.at("operations");
    } else if (j.contains("audit_log")) {
      list = &j.at("audit_log");
    }
  }
  if (!list->is_array()) {
    throw Error(ErrorCode::ParseError, "a triage log must be an array of operations");
  }
  std::vector<Operation> ops;
  for (const auto& e : *list) {
    if (!e.is_object() || !e.contains("op") || !e.at("op").is_string()) {
      throw Error(ErrorCode::ParseError, "log entry without an 'op' name");
    }
    ops.push_back({e.at("op").get<std::string>(), e.value("args", Json::object())});
  }
  return ops;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace abc
