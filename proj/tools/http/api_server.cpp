#include "api_server.hpp"

#include <httplib.h>

#include <charconv>
#include <optional>

#include "abc/abc.hpp"

namespace abc::http {

namespace {

constexpr const char* kJson = "application/json";

Json error_body(ErrorCode code, const std::string& message) {
  return Json{{"error",
               {{"code", std::string(to_string(code))},
                {"message", message},
                {"status", status_for(code)}}}};
}

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(canonical_dump(body), kJson);
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message,
                std::int64_t version) {
  res.set_header("X-Model-Version", std::to_string(version));
  send_json(res, error_body(code, message), status_for(code));
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json body = parse_json_text(req.body);
  if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  return body;
}

std::optional<std::int64_t> parse_version(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "expected version must be an integer");
  }
  return value;
}

// The header wins over the body field; the field is removed either way so it
// never reaches the operation arguments.
std::optional<std::int64_t> take_expected_version(const httplib::Request& req, Json& body) {
  std::optional<std::int64_t> expected;
  if (body.contains("expected_version")) {
    const Json v = body.at("expected_version");
    body.erase("expected_version");
    if (!v.is_null()) {
      if (!v.is_number_integer()) {
        throw Error(ErrorCode::InvalidArgument, "expected_version must be an integer");
      }
      expected = v.get<std::int64_t>();
    }
  }
  if (req.has_header("X-Expected-Version")) {
    expected = parse_version(req.get_header_value("X-Expected-Version"));
  }
  return expected;
}

Json coverage_json(const Coverage& c) {
  return Json{{"total", c.total},           {"unresolved", c.unresolved},
              {"eliminated", c.eliminated}, {"merged", c.merged},
              {"documented", c.documented}, {"fraction_resolved", c.fraction_resolved}};
}

Json matrix_summary(const CollusionMatrix& m) {
  Json j{{"id", m.id},
         {"category_ref", m.category_ref},
         {"role_scope", m.role_scope},
         {"created_at", m.created_at},
         {"coverage", coverage_json(coverage(m))}};
  if (m.instance_tag) j["instance_tag"] = *m.instance_tag;
  return j;
}

Json matrix_detail(const CollusionMatrix& m) {
  Json j = matrix_summary(m);
  const auto rows = attacker_sets(m.role_scope);
  const auto cols = target_sets(m.role_scope);
  const auto glyphs = cell_glyphs(m);
  j["rows"] = Json::array();
  for (const auto& r : rows) j["rows"].push_back(r.to_string());
  j["columns"] = Json::array();
  for (const auto& c : cols) j["columns"].push_back(c.to_string());
  j["cells"] = Json::array();
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      const CellCoordinate coord(rows[ri], cols[ci]);
      const auto& res = m.cells.at(coord);
      Json cell{{"id", coord.to_string()},
                {"row", ri},
                {"column", ci},
                {"state", std::string(to_string(res.state))},
                {"glyph", glyphs.at(coord)},
                {"rationale", res.rationale},
                {"scenario_refs", res.scenario_refs},
                {"scenario_count", res.scenario_refs.size()}};
      if (res.merge_target) cell["merge_target"] = res.merge_target->to_string();
      j["cells"].push_back(std::move(cell));
    }
  }
  j["text"] = render_matrix_text(m);
  return j;
}

Json scenarios_json(const ThreatModel& model) {
  Json out = Json::array();
  for (const auto& [scenario, score] : ranked_scenarios(model)) {
    Json entry{{"scenario", scenario}};
    entry["score"] = score ? Json(*score) : Json(nullptr);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownScenario:
      return 404;
    case ErrorCode::VersionConflict:
    case ErrorCode::NotUnresolved:
    case ErrorCode::AlreadyUnresolved:
    case ErrorCode::SelfMerge:
    case ErrorCode::MergeIntoEliminated:
    case ErrorCode::MergeCycle:
    case ErrorCode::MatrixAlreadyGenerated:
    case ErrorCode::DuplicateMatrixForCategoryInstance:
    case ErrorCode::CategoryExcluded:
    case ErrorCode::ScenarioConflict:
    case ErrorCode::DuplicateNameConflict:
    case ErrorCode::ReferencedEntityRemoval:
    case ErrorCode::ModelNotReady:
    case ErrorCode::MatrixIncomplete:
    case ErrorCode::DanglingMergeChain:
      return 409;
    case ErrorCode::ParseError:
      return 400;
    case ErrorCode::IoError:
      return 500;
    case ErrorCode::InvalidArgument:
    case ErrorCode::ReservedName:
    case ErrorCode::EmptyScope:
    case ErrorCode::ScopeTooLarge:
    case ErrorCode::EmptyRationale:
    case ErrorCode::EmptyScenarioList:
    case ErrorCode::PartyMismatch:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidCellId:
    case ErrorCode::SchemaTooNew:
    case ErrorCode::InvariantViolation:
      return 422;
  }
  return 500;
}

ApiServer::ApiServer(Workbench& workbench)
    : workbench_(workbench), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

int ApiServer::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool ApiServer::listen() { return server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_->is_running()) server_->stop();
}

void ApiServer::wait_until_ready() const { server_->wait_until_ready(); }

void ApiServer::install_routes() {
  auto& wb = workbench_;

  // Wraps a read handler: the handler sees one immutable snapshot.
  auto read = [&wb](auto fn) {
    return [&wb, fn](const httplib::Request& req, httplib::Response& res) {
      auto snap = wb.snapshot();
      try {
        res.set_header("X-Model-Version", std::to_string(snap->model.version));
        fn(req, res, *snap);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what(), snap->model.version);
      }
    };
  };

  // Wraps a mutation: the handler turns the request into an operation which
  // is applied under the workbench's writer lock.
  auto write = [&wb](auto to_operation) {
    return [&wb, to_operation](const httplib::Request& req, httplib::Response& res) {
      try {
        Json body = parse_body(req);
        const auto expected = take_expected_version(req, body);
        const Operation op = to_operation(req, body);
        auto doc = wb.apply(op, expected);
        const auto version = doc->model.version;
        res.set_header("X-Model-Version", std::to_string(version));
        Json out{{"version", version}, {"op", op.name}};
        if (op.name == "generate_matrix" && !doc->model.matrices.empty()) {
          out["matrix"] = matrix_summary(doc->model.matrices.back());
        }
        send_json(res, out);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what(), wb.version());
      } catch (const Json::exception& e) {
        send_error(res, ErrorCode::InvalidArgument, e.what(), wb.version());
      }
    };
  };

  server_->Get("/api/model", read([](const auto&, auto& res, const ModelDocument& doc) {
    send_json(res, document_to_json(doc));
  }));

  server_->Get("/api/stats", read([](const auto&, auto& res, const ModelDocument& doc) {
    send_json(res, stats_to_json(compute_stats(doc.model)));
  }));

  server_->Get("/api/report", read([](const httplib::Request& req, auto& res,
                                      const ModelDocument& doc) {
    const std::string name = req.has_param("format") ? req.get_param_value("format") : "markdown";
    const auto format = report_format_from_string(name);
    if (format == ReportFormat::Structured) {
      res.set_content(serialize_document(doc), kJson);
    } else {
      res.set_content(export_report(doc.model, format), "text/markdown; charset=utf-8");
    }
  }));

  server_->Get("/api/matrices", read([](const auto&, auto& res, const ModelDocument& doc) {
    Json out = Json::array();
    for (const auto& m : doc.model.matrices) out.push_back(matrix_summary(m));
    send_json(res, out);
  }));

  server_->Get(R"(/api/matrices/([^/]+))",
               read([](const httplib::Request& req, auto& res, const ModelDocument& doc) {
                 send_json(res, matrix_detail(require_matrix(doc.model, req.matches[1].str())));
               }));

  server_->Get("/api/scenarios", read([](const auto&, auto& res, const ModelDocument& doc) {
    send_json(res, scenarios_json(doc.model));
  }));

  server_->Post("/api/matrices", write([](const httplib::Request&, Json& body) {
    return Operation{"generate_matrix", body};
  }));

  server_->Post(R"(/api/matrices/([^/]+)/cells/([^/]+)/(eliminate|merge|document|reopen))",
                write([](const httplib::Request& req, Json& body) {
                  body["matrix_id"] = req.matches[1].str();
                  body["cell"] = req.matches[2].str();
                  return Operation{req.matches[3].str(), body};
                }));

  server_->Post(R"(/api/scenarios/([^/]+)/score)", write([](const httplib::Request& req, Json& body) {
    body["scenario_id"] = req.matches[1].str();
    return Operation{"score", body};
  }));

  // Any engine operation, for scripts: {"op": name, "args": {...}}.
  server_->Post("/api/ops", write([](const httplib::Request&, Json& body) {
    if (!body.contains("op") || !body.at("op").is_string()) {
      throw Error(ErrorCode::InvalidArgument, "missing string field 'op'");
    }
    return Operation{body.at("op").get<std::string>(), body.value("args", Json::object())};
  }));

  server_->set_error_handler([&wb](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      send_error(res, ErrorCode::NotFound, "no route for " + req.method + " " + req.path,
                 wb.version());
    }
  });

  server_->set_exception_handler(
      [&wb](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const Error& e) {
          send_error(res, e.code(), e.what(), wb.version());
        } catch (const std::exception& e) {
          res.status = 500;
          res.set_content(canonical_dump(Json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}),
                          kJson);
        }
      });
}

}  // namespace abc::http
