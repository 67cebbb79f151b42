#include <gtest/gtest.h>

#include "abc/error.hpp"
#include "abc/party.hpp"

namespace abc {
namespace {

TEST(PartySet, RendersSortedWithExternalLast) {
  PartySet p({"server", "client"}, true);
  EXPECT_EQ(p.to_string(), "client+server+external");
  EXPECT_EQ(p.size(), 3u);
  EXPECT_TRUE(p.contains_role("client"));
  EXPECT_FALSE(p.contains_role("external"));
}

TEST(PartySet, DeduplicatesRoles) {
  PartySet p({"miner", "miner", "client"}, false);
  EXPECT_EQ(p.roles(), (std::vector<std::string>{"client", "miner"}));
}

TEST(PartySet, RejectsExternalAsRoleName) {
  EXPECT_THROW(PartySet({"external"}, false), Error);
}

TEST(PartySet, ParseRoundTrips) {
  for (const char* text : {"client", "external", "client+external", "a+b+c", "a+b+c+external"}) {
    EXPECT_EQ(PartySet::parse(text).to_string(), text);
  }
}

TEST(PartySet, ParseRejectsNonCanonicalSpellings) {
  for (const char* text : {"", "server+client", "external+client", "a++b", "+a", "a+", "a+a",
                           "external+external", "a b", "a>b"}) {
    EXPECT_THROW(PartySet::parse(text), Error) << text;
  }
}

TEST(PartySet, SubsetRelation) {
  const auto small = PartySet::parse("client");
  const auto big = PartySet::parse("client+server+external");
  EXPECT_TRUE(small.is_subset_of(big));
  EXPECT_FALSE(big.is_subset_of(small));
  EXPECT_TRUE(PartySet::parse("external").is_subset_of(big));
  EXPECT_FALSE(PartySet::parse("external").is_subset_of(PartySet::parse("client")));
}

TEST(PartySet, CanonicalOrder) {
  std::vector<PartySet> sets = {
      PartySet::parse("client+server+external"), PartySet::parse("server+external"),
      PartySet::parse("client+external"),        PartySet::parse("client+server"),
      PartySet::parse("external"),               PartySet::parse("server"),
      PartySet::parse("client"),
  };
  std::sort(sets.begin(), sets.end());
  std::vector<std::string> rendered;
  for (const auto& s : sets) rendered.push_back(s.to_string());
  EXPECT_EQ(rendered, (std::vector<std::string>{"client", "server", "external", "client+server",
                                                "client+external", "server+external",
                                                "client+server+external"}));
}

TEST(RoleName, ValidCharacters) {
  EXPECT_TRUE(is_valid_role_name("remote-workload"));
  EXPECT_TRUE(is_valid_role_name("node_2.a"));
  EXPECT_FALSE(is_valid_role_name(""));
  EXPECT_FALSE(is_valid_role_name("a+b"));
  EXPECT_FALSE(is_valid_role_name("a->b"));
  EXPECT_FALSE(is_valid_role_name("with space"));
}

TEST(CellCoordinate, ParseAndRender) {
  const auto c = CellCoordinate::parse("client+external->server");
  EXPECT_EQ(c.attackers.to_string(), "client+external");
  EXPECT_EQ(c.targets.to_string(), "server");
  EXPECT_EQ(c.to_string(), "client+external->server");
}

TEST(CellCoordinate, ExternalTargetIsInvariantViolation) {
  try {
    CellCoordinate::parse("server->external");
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
  }
  EXPECT_THROW(CellCoordinate(PartySet::parse("client"), PartySet::parse("client+external")), Error);
}

TEST(CellCoordinate, MalformedIdsAreInvalidCellId) {
  for (const char* text : {"client", "client->", "->server", "client->server->client",
                           "server+client->client", "client-> server", "client=>server"}) {
    try {
      CellCoordinate::parse(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidCellId) << text;
    }
  }
}

}  // namespace
}  // namespace abc
