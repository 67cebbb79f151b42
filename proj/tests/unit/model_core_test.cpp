#include <gtest/gtest.h>

#include "abc/abc.hpp"
#include "test_support.hpp"

namespace abc {
namespace {

bool has_error_containing(const ValidationReport& r, const std::string& text) {
  for (const auto& i : r.issues) {
    if (i.severity == Severity::Error && i.message.find(text) != std::string::npos) return true;
  }
  return false;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no abc::Error thrown";
  return ErrorCode::IoError;
}

TEST(ValidateModel, ReservedRoleName) {
  ThreatModel m;
  m.name = "x";
  m.roles.push_back({"external", ""});
  EXPECT_TRUE(has_error_containing(validate_model(m), "reserved role name"));
}

TEST(ValidateModel, CompuCoinSystemModelHasNoErrors) {
  const auto doc = test::replay_fixture_until("compucoin", "derive");
  EXPECT_EQ(doc.model.roles.size(), 2u);
  EXPECT_EQ(doc.model.assets.size(), 6u);
  const auto report = validate_model(doc.model);
  EXPECT_EQ(report.error_count(), 0u);
  EXPECT_FALSE(report.has_errors());
}

TEST(ValidateModel, UnresolvedModuleAssetReference) {
  ThreatModel m = test::tiny_model(1);
  SystemModule mod;
  mod.name = "escrow module";
  mod.asset_refs = {"escrow"};
  m.modules.push_back(mod);
  EXPECT_TRUE(has_error_containing(validate_model(m), "unresolved asset reference"));
}

TEST(ValidateModel, WarnsOnEmptyAssumptionsAndDependencies) {
  const auto r = validate_model(test::tiny_model(1));
  EXPECT_EQ(r.error_count(), 0u);
  EXPECT_EQ(r.warning_count(), 2u);
  ThreatModel m = add_dependency(add_assumption(test::tiny_model(1), "a"), "d");
  EXPECT_EQ(validate_model(m).warning_count(), 0u);
}

TEST(ValidateModel, NetworkGraphChecks) {
  ThreatModel m = test::tiny_model(1);
  SystemModule mod;
  mod.name = "m";
  mod.network_model.nodes = {{"n1", "r0", NodeKind::Participant}, {"n1", "ghost", NodeKind::Participant}};
  mod.network_model.edges = {{"n1", "nowhere", ""}};
  m.modules.push_back(mod);
  const auto r = validate_model(m);
  EXPECT_GE(r.error_count(), 3u);  // duplicate id, unknown role, dangling edge
}

TEST(ValidateModel, IsIdempotent) {
  const auto doc = test::replay_fixture("bitcoin");
  EXPECT_EQ(validate_model(doc.model), validate_model(doc.model));
}

TEST(ValidateModel, FlagsHandEditedMergeIntoEliminated) {
  auto doc = test::replay_fixture("compucoin");
  auto& m = doc.model.matrices.front();
  m.cells.at(CellCoordinate::parse("client+server->server")).merge_target =
      CellCoordinate::parse("server->server");
  EXPECT_TRUE(has_error_containing(validate_model(doc.model), "eliminated"));
}

TEST(Editing, AddRoleBumpsVersion) {
  const ThreatModel m = test::tiny_model(2);
  const ThreatModel next = upsert_role(m, {"miner", "mines"});
  EXPECT_EQ(next.roles.size(), 3u);
  EXPECT_EQ(next.version, m.version + 1);
}

TEST(Editing, UpsertRoleReplacesByName) {
  const ThreatModel m = upsert_role(test::tiny_model(1), {"r0", "new description"});
  ASSERT_EQ(m.roles.size(), 1u);
  EXPECT_EQ(m.roles[0].description, "new description");
}

TEST(Editing, ReservedAndInvalidRoleNames) {
  EXPECT_EQ(code_of([] { upsert_role(test::tiny_model(1), {"external", ""}); }), ErrorCode::ReservedName);
  EXPECT_EQ(code_of([] { upsert_role(test::tiny_model(1), {"a+b", ""}); }), ErrorCode::InvalidArgument);
}

TEST(Editing, RemoveRoleInMatrixScopeIsRejected) {
  const auto doc = test::replay_fixture("compucoin");
  EXPECT_EQ(code_of([&] { remove_role(doc.model, "server"); }), ErrorCode::ReferencedEntityRemoval);
}

TEST(Editing, RemoveUnusedRole) {
  const ThreatModel m = remove_role(upsert_role(test::tiny_model(1), {"spare", ""}), "spare");
  EXPECT_EQ(m.roles.size(), 1u);
  EXPECT_EQ(code_of([&] { remove_role(m, "spare"); }), ErrorCode::NotFound);
}

TEST(Editing, ReUpsertAssetReplacesRequirements) {
  const ThreatModel m = test::tiny_model(1);
  Asset a = *m.find_asset("asset");
  a.security_requirements.push_back({"req2", "another", ""});
  const ThreatModel next = upsert_asset(m, a);
  EXPECT_EQ(next.version, m.version + 1);
  EXPECT_EQ(next.find_asset("asset")->security_requirements.size(), 2u);
  EXPECT_EQ(next.assets.size(), 1u);
}

TEST(Editing, AssetKindChangeIsDuplicateNameConflict) {
  const ThreatModel m = test::tiny_model(1);
  Asset a = *m.find_asset("asset");
  a.kind = AssetKind::Abstract;
  EXPECT_EQ(code_of([&] { upsert_asset(m, a); }), ErrorCode::DuplicateNameConflict);
}

TEST(Editing, DroppingNegatedRequirementIsRejected) {
  const ThreatModel m = test::tiny_model(1);
  Asset a = *m.find_asset("asset");
  a.security_requirements = {{"other", "other statement", ""}};
  EXPECT_EQ(code_of([&] { upsert_asset(m, a); }), ErrorCode::ReferencedEntityRemoval);
}

TEST(Editing, RemoveAssetWithCategoriesIsRejected) {
  const ThreatModel m = test::tiny_model(1);
  EXPECT_EQ(code_of([&] { remove_asset(m, "asset"); }), ErrorCode::ReferencedEntityRemoval);
}

TEST(Editing, ModuleWithUnknownAssetIsNotFound) {
  SystemModule mod;
  mod.name = "m";
  mod.asset_refs = {"escrow"};
  EXPECT_EQ(code_of([&] { upsert_module(test::tiny_model(1), mod); }), ErrorCode::NotFound);
}

TEST(Editing, InitTwiceIsRejected) {
  const ThreatModel m = init_model({}, "a");
  EXPECT_EQ(m.version, 1);
  EXPECT_EQ(code_of([&] { init_model(upsert_role(m, {"r", ""}), "b"); }), ErrorCode::InvalidArgument);
}

TEST(Editing, EmptyRequirementStatementIsInvariantViolation) {
  Asset a;
  a.name = "x";
  a.security_requirements = {{"r", "", ""}};
  EXPECT_EQ(code_of([&] { upsert_asset(init_model({}, "m"), a); }), ErrorCode::InvariantViolation);
}

}  // namespace
}  // namespace abc
