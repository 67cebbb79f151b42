#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "abc/abc.hpp"
#include "test_support.hpp"

namespace abc {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no abc::Error thrown";
  return ErrorCode::IoError;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

TEST(Document, AuditLogVersionsAreGapless) {
  const auto doc = test::replay_fixture("compucoin");
  ASSERT_EQ(doc.audit_log.size(), static_cast<std::size_t>(doc.model.version));
  for (std::size_t i = 0; i < doc.audit_log.size(); ++i) {
    EXPECT_EQ(doc.audit_log[i].version, static_cast<std::int64_t>(i + 1));
    EXPECT_EQ(doc.audit_log[i].timestamp, test::kFixedTimestamp);
  }
  EXPECT_NO_THROW(verify_document(doc));
}

TEST(Document, DeriveLogPinsCatalog) {
  const auto doc = test::replay_fixture("compucoin");
  for (const auto& e : doc.audit_log) {
    if (e.op == "derive") EXPECT_TRUE(e.args.contains("catalog"));
  }
}

TEST(Document, ReplayReproducesModel) {
  const auto doc = test::replay_fixture("bitcoin");
  EXPECT_EQ(replay(doc.audit_log), doc.model);
}

TEST(Document, SaveLoadRoundTrip) {
  test::TempDir dir;
  const auto doc = test::replay_fixture("compucoin");
  save(doc, dir / "m.json");
  const auto loaded = load(dir / "m.json");
  EXPECT_EQ(loaded, doc);
  EXPECT_EQ(serialize_document(loaded), serialize_document(doc));
}

TEST(Document, CanonicalText) {
  const auto doc = test::replay_fixture("compucoin");
  const std::string text = serialize_document(doc);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find('\r'), std::string::npos);
  // Top-level keys are sorted.
  const auto audit = text.find("\n  \"audit_log\"");
  const auto model = text.find("\n  \"model\"");
  const auto schema = text.find("\n  \"schema_version\"");
  ASSERT_NE(schema, std::string::npos);
  EXPECT_LT(audit, model);
  EXPECT_LT(model, schema);
  EXPECT_EQ(serialize_document(parse_document(text)), text);
}

TEST(Document, LoadMissingFile) {
  test::TempDir dir;
  EXPECT_EQ(code_of([&] { load(dir / "none.json"); }), ErrorCode::NotFound);
}

TEST(Document, ParseErrorReportsPosition) {
  try {
    parse_document("{\n  \"schema_version\": 1,\n  oops\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Document, SchemaTooNew) {
  Json j = document_to_json(test::replay_fixture("compucoin"));
  j["schema_version"] = kSchemaVersion + 1;
  EXPECT_EQ(code_of([&] { parse_document(j.dump()); }), ErrorCode::SchemaTooNew);
}

TEST(Document, ExternalTargetIsInvariantViolation) {
  Json j = document_to_json(test::replay_fixture("compucoin"));
  auto& cells = j["model"]["matrices"][0]["cells"];
  cells["server->external"] = cells["server->server"];
  cells.erase("server->server");
  EXPECT_EQ(code_of([&] { parse_document(j.dump()); }), ErrorCode::InvariantViolation);
}

TEST(Document, HandEditedStateIsInvariantViolation) {
  Json j = document_to_json(test::replay_fixture("compucoin"));
  j["model"]["matrices"][0]["cells"]["client->client"]["state"] = "unresolved";
  EXPECT_EQ(code_of([&] { parse_document(j.dump()); }), ErrorCode::InvariantViolation);
}

TEST(Document, TamperedLogIsInvariantViolation) {
  Json j = document_to_json(test::replay_fixture("compucoin"));
  j["audit_log"][3]["version"] = 9;
  EXPECT_EQ(code_of([&] { parse_document(j.dump()); }), ErrorCode::InvariantViolation);
  Json k = document_to_json(test::replay_fixture("compucoin"));
  k["model"]["name"] = "renamed";
  EXPECT_EQ(code_of([&] { parse_document(k.dump()); }), ErrorCode::InvariantViolation);
}

TEST(Document, OperationsFromJsonShapes) {
  const Json ops = Json::array({{{"op", "init"}, {"args", {{"name", "x"}}}}});
  EXPECT_EQ(operations_from_json(ops).size(), 1u);
  EXPECT_EQ(operations_from_json(Json{{"operations", ops}}).size(), 1u);
  const auto doc = test::replay_fixture("compucoin");
  EXPECT_EQ(operations_from_json(document_to_json(doc)).size(), doc.audit_log.size());
}

TEST(Operations, UnknownAndMalformed) {
  EXPECT_EQ(code_of([] { apply_operation({}, {"frobnicate", Json::object()}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { apply_operation({}, {"init", Json::object()}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { apply_operation({}, {"init", Json{{"name", 3}}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { apply_operation({}, {"init", Json::array()}); }), ErrorCode::InvalidArgument);
}

TEST(Operations, NamesCoverEveryMutation) {
  const auto& names = operation_names();
  for (const char* n : {"init", "upsert_role", "remove_role", "upsert_asset", "remove_asset",
                        "upsert_module", "add_assumption", "add_dependency", "derive", "add_category",
                        "exclude_category", "generate_matrix", "eliminate", "merge", "document",
                        "reopen", "score"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
}

TEST(Operations, FailedOperationLeavesDocumentUntouched) {
  const auto doc = test::replay_fixture("compucoin");
  const auto copy = doc;
  EXPECT_THROW(record(doc, {"eliminate", {{"matrix_id", "m1"}, {"cell", "client->client"}, {"rationale", "x"}}},
                      test::kFixedTimestamp),
               Error);
  EXPECT_EQ(doc, copy);
}

TEST(Workbench, PersistsEveryMutation) {
  test::TempDir dir;
  const auto path = dir / "wb.json";
  Workbench wb(ModelDocument{}, path, [] { return std::string("t"); });
  wb.apply({"init", {{"name", "w"}}});
  wb.apply({"upsert_role", {{"role", {{"name", "client"}}}}});
  EXPECT_EQ(load(path), *wb.snapshot());
  EXPECT_EQ(wb.version(), 2);
}

TEST(Workbench, StaleExpectedVersionConflicts) {
  Workbench wb(ModelDocument{}, std::nullopt, [] { return std::string("t"); });
  wb.apply({"init", {{"name", "w"}}}, 0);
  EXPECT_EQ(code_of([&] { wb.apply({"add_assumption", {{"text", "a"}}}, 0); }), ErrorCode::VersionConflict);
  EXPECT_EQ(wb.version(), 1);
  wb.apply({"add_assumption", {{"text", "a"}}}, 1);
  EXPECT_EQ(wb.version(), 2);
}

TEST(Workbench, FailedOperationDoesNotPublish) {
  Workbench wb(ModelDocument{}, std::nullopt, [] { return std::string("t"); });
  wb.apply({"init", {{"name", "w"}}});
  const auto before = wb.snapshot();
  EXPECT_THROW(wb.apply({"remove_role", {{"name", "ghost"}}}), Error);
  EXPECT_EQ(wb.snapshot(), before);
}

TEST(Workbench, ConcurrentWritersProduceGaplessVersions) {
  Workbench wb(ModelDocument{}, std::nullopt, [] { return std::string("t"); });
  wb.apply({"init", {{"name", "w"}}});
  constexpr int kThreads = 8, kPerThread = 25;
  std::atomic<int> conflicts{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < kPerThread; ++i) {
        // Half the writers demand the version they last saw.
        if (t % 2 == 0) {
          const auto seen = wb.version();
          try {
            wb.apply({"add_assumption", {{"text", "t" + std::to_string(t) + "-" + std::to_string(i)}}}, seen);
          } catch (const Error& e) {
            if (e.code() == ErrorCode::VersionConflict) ++conflicts;
          }
        } else {
          wb.apply({"add_assumption", {{"text", "t" + std::to_string(t) + "-" + std::to_string(i)}}});
        }
        // Readers always see a consistent snapshot.
        auto snap = wb.snapshot();
        EXPECT_EQ(snap->audit_log.size(), static_cast<std::size_t>(snap->model.version));
      }
    });
  }
  for (auto& th : threads) th.join();
  const auto doc = wb.snapshot();
  EXPECT_EQ(doc->model.version, 1 + kThreads * kPerThread - conflicts.load());
  EXPECT_NO_THROW(verify_document(*doc));
}

}  // namespace
}  // namespace abc
