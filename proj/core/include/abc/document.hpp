#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "abc/model.hpp"
#include "abc/serialization.hpp"

namespace abc {

inline constexpr int kSchemaVersion = 1;

// A named engine operation with JSON arguments. Every mutation of a model
// document goes through apply_operation so the audit log can replay it.
struct Operation {
  std::string name;
  Json args = Json::object();
};

struct AuditEntry {
  std::string timestamp;
  std::string op;
  Json args = Json::object();
  std::int64_t version = 0;

  bool operator==(const AuditEntry&) const = default;
};

struct ModelDocument {
  int schema_version = kSchemaVersion;
  ThreatModel model;
  std::vector<AuditEntry> audit_log;

  bool operator==(const ModelDocument&) const = default;
};

// Names accepted by apply_operation.
const std::vector<std::string>& operation_names();

// Dispatches to the engine. Throws Error for unknown operations, malformed
// arguments (InvalidArgument) and any engine failure.
ThreatModel apply_operation(const ThreatModel& model, const Operation& op);

// Applies `op` and appends the audit entry.
ModelDocument record(const ModelDocument& doc, const Operation& op, std::string timestamp);

// Re-applies the log to an empty model.
ThreatModel replay(std::span<const AuditEntry> log);

// Throws InvariantViolation unless log versions run 1..k and replaying the
// log reproduces doc.model exactly.
void verify_document(const ModelDocument& doc);

Json document_to_json(const ModelDocument& doc);
ModelDocument document_from_json(const Json& j);

// Canonical text of a document (what save writes).
std::string serialize_document(const ModelDocument& doc);
// Parse + schema check + invariant checks + replay verification.
ModelDocument parse_document(const std::string& text);

void save(const ModelDocument& doc, const std::filesystem::path& path);
ModelDocument load(const std::filesystem::path& path);

// A triage log file: {"operations": [{"op": ..., "args": {...}}, ...]} or a
// bare array of such entries; audit entries are accepted as well.
std::vector<Operation> operations_from_json(const Json& j);

// "YYYY-MM-DDTHH:MM:SSZ" for the current UTC time.
std::string utc_timestamp();

}  // namespace abc
