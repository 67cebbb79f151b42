#include <gtest/gtest.h>

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "abc/abc.hpp"
#include "cli/cli.hpp"
#include "http/api_server.hpp"
#include "test_support.hpp"

namespace abc {
namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Workbench::Clock fixed_clock() {
  return [] { return std::string(test::kFixedTimestamp); };
}

Run cli(const std::filesystem::path& model, std::vector<std::string> args) {
  std::vector<std::string> argv = {"abc", "-m", model.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int status = cli::run(argv, out, err, fixed_clock());
  return {status, out.str(), err.str()};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  test::TempDir dir;
  std::filesystem::path model = dir / "model.json";

  void replay(const char* fixture) {
    const auto r = cli(model, {"replay", test::fixture_path(fixture).string()});
    ASSERT_EQ(r.status, 0) << r.err;
  }
};

TEST_F(CliTest, DepositBound) {
  const auto r = cli(model, {"deposit", "--cheat", "10", "--honest", "4", "--p", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("min_deposit: 6\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("deterred"), std::string::npos);
}

TEST_F(CliTest, DepositJsonAndCheck) {
  auto r = cli(model, {"--json", "deposit", "--cheat", "10", "--honest", "4", "--p", "1/2", "--deposit", "11"});
  ASSERT_EQ(r.status, 0) << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(rational_from_json(j.at("min_deposit")), Rational(12));
  EXPECT_FALSE(j.at("deterred").get<bool>());
  EXPECT_EQ(cli(model, {"deposit", "--cheat", "1", "--honest", "0", "--p", "0"}).status, 1);
}

TEST_F(CliTest, BitcoinReplayStats) {
  replay("bitcoin");
  const auto r = cli(model, {"--json", "stats"});
  ASSERT_EQ(r.status, 0);
  const Json st = Json::parse(r.out);
  EXPECT_EQ(st.at("matrices"), 5);
  EXPECT_EQ(st.at("total_cells"), 105);
  EXPECT_EQ(st.at("distilled_scenarios"), 10);
  const auto text = cli(model, {"stats"});
  EXPECT_NE(text.out.find("total threat cases:        105"), std::string::npos) << text.out;
}

TEST_F(CliTest, MergeOfEliminatedCellFails) {
  replay("compucoin");
  const auto before = load(model);
  const auto r = cli(model, {"cell", "merge", "m1", "client->client", "--into", "client->server", "--why", "x"});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("NotUnresolved"), std::string::npos) << r.err;
  EXPECT_EQ(load(model), before);
  const auto j = cli(model, {"--json", "cell", "merge", "m1", "client->client", "--into", "client->server", "--why", "x"});
  EXPECT_EQ(Json::parse(j.out).at("error").at("code"), "NotUnresolved");
}

TEST_F(CliTest, StepOneThroughFourByHand) {
  ASSERT_EQ(cli(model, {"init", "Demo"}).status, 0);
  EXPECT_NE(cli(model, {"init", "Again"}).status, 0);
  ASSERT_EQ(cli(model, {"role", "add", "client", "-d", "pays"}).status, 0);
  ASSERT_EQ(cli(model, {"role", "add", "server"}).status, 0);
  auto a = cli(model, {"asset", "add", "service payments", "--class", "service-payments", "--req",
                       "proper-reward|Servers are rewarded properly.|service theft"});
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(cli(model, {"assumption", "add", "signed transactions"}).status, 0);
  ASSERT_EQ(cli(model, {"dependency", "add", "a VC protocol"}).status, 0);
  write_text(dir / "net.json",
             R"({"nodes":[{"id":"c","label":"client","node_kind":"participant"}],"edges":[]})");
  ASSERT_EQ(cli(model, {"module", "add", "outsourcing", "--asset", "service payments", "--network-file",
                        (dir / "net.json").string()})
                .status,
            0);
  auto d = cli(model, {"derive"});
  ASSERT_EQ(d.status, 0) << d.err;
  EXPECT_NE(d.err.find("warning"), std::string::npos);  // unmatched catalog patterns
  auto gen = cli(model, {"matrix", "gen", "service-payments.service-theft", "--scope", "client,server"});
  ASSERT_EQ(gen.status, 0) << gen.err;
  EXPECT_NE(gen.out.find("21 cells"), std::string::npos);
  ASSERT_EQ(cli(model, {"cell", "eliminate", "m1", "server->client", "--why", "no service"}).status, 0);
  write_text(dir / "s.json", Json(test::make_scenario("theft")).dump());
  ASSERT_EQ(cli(model, {"cell", "document", "m1", "client->server", "--scenario-file", (dir / "s.json").string()})
                .status,
            0);
  ASSERT_EQ(cli(model, {"cell", "merge", "m1", "client+server->server", "--into", "client->server", "--why",
                        "sole payer"})
                .status,
            0);
  ASSERT_EQ(cli(model, {"score", "theft", "--likelihood", "4", "--severity", "5"}).status, 0);
  auto sc = cli(model, {"scenarios"});
  EXPECT_NE(sc.out.find("20\ttheft"), std::string::npos) << sc.out;
  ASSERT_EQ(cli(model, {"cell", "reopen", "m1", "server->client"}).status, 0);
  auto show = cli(model, {"matrix", "show", "m1"});
  EXPECT_NE(show.out.find("D1"), std::string::npos);
  EXPECT_NE(show.out.find("->B1"), std::string::npos);
  EXPECT_EQ(cli(model, {"matrix", "list"}).status, 0);
  auto report = cli(model, {"report", "--format", "markdown"});
  EXPECT_NE(report.out.find("service theft"), std::string::npos);
  auto structured = cli(model, {"report", "--format", "structured"});
  EXPECT_EQ(structured.out, serialize_document(load(model)));
  EXPECT_EQ(cli(model, {"validate"}).status, 0);
  const auto doc = load(model);
  EXPECT_NO_THROW(verify_document(doc));
}

TEST_F(CliTest, EditingCommands) {
  ASSERT_EQ(cli(model, {"init", "Edit"}).status, 0);
  ASSERT_EQ(cli(model, {"role", "add", "a"}).status, 0);
  ASSERT_EQ(cli(model, {"role", "add", "b"}).status, 0);
  ASSERT_EQ(cli(model, {"role", "rm", "b"}).status, 0);
  EXPECT_NE(cli(model, {"role", "add", "external"}).status, 0);
  ASSERT_EQ(cli(model, {"asset", "add", "box", "--req", "x|keeps things", "--tag", "t1", "--tag", "t2"}).status, 0);
  EXPECT_NE(cli(model, {"asset", "add", "bad", "--req", "no-pipe"}).status, 0);
  write_text(dir / "asset.json", R"({"name":"spare","security_requirements":[{"id":"y","statement":"stays spare"}]})");
  ASSERT_EQ(cli(model, {"asset", "add", "--file", (dir / "asset.json").string()}).status, 0);
  ASSERT_EQ(cli(model, {"asset", "rm", "spare"}).status, 0);
  ASSERT_EQ(cli(model, {"category", "add", "box", "breakage", "--tag", "t1", "--negates", "x"}).status, 0);
  ASSERT_EQ(cli(model, {"exclude-category", "box@t1.breakage", "--why", "not in scope"}).status, 0);
  EXPECT_NE(cli(model, {"matrix", "gen", "box@t1.breakage"}).status, 0);
  write_text(dir / "cat.json", R"([{"asset_pattern":"box","category_name":"loss","category_template":"box is lost"}])");
  auto d = cli(model, {"derive", "--catalog", (dir / "cat.json").string()});
  ASSERT_EQ(d.status, 0) << d.err;
  const auto doc = load(model);
  EXPECT_NE(doc.model.find_category("box@t1.loss"), nullptr);
  EXPECT_NE(doc.model.find_category("box@t2.loss"), nullptr);
}

TEST_F(CliTest, ErrorsAndUsage) {
  EXPECT_NE(cli(model, {"stats"}).status, 0);  // no model file yet
  EXPECT_NE(cli(model, {}).status, 0);
  EXPECT_NE(cli(model, {"bogus"}).status, 0);
  EXPECT_EQ(cli(model, {"--help"}).status, 0);
  write_text(model, "{ not json");
  const auto r = cli(model, {"stats"});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
}

TEST_F(CliTest, ReplayFailureLeavesFileUntouched) {
  replay("compucoin");
  const std::string before = serialize_document(load(model));
  write_text(dir / "log.json",
             R"([{"op":"add_assumption","args":{"text":"ok"}},{"op":"eliminate","args":{"matrix_id":"m1","cell":"client->client","rationale":"x"}}])");
  const auto r = cli(model, {"replay", (dir / "log.json").string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("log entry 2"), std::string::npos) << r.err;
  EXPECT_EQ(serialize_document(load(model)), before);
}

TEST_F(CliTest, ModelPathFromEnvironment) {
  const auto env_path = dir / "env-model.json";
  ::setenv("ABC_MODEL_PATH", env_path.string().c_str(), 1);
  std::ostringstream out, err;
  const int status = cli::run({"abc", "init", "FromEnv"}, out, err, fixed_clock());
  ::unsetenv("ABC_MODEL_PATH");
  ASSERT_EQ(status, 0) << err.str();
  EXPECT_EQ(load(env_path).model.name, "FromEnv");
}

// The same operations through the CLI and through HTTP give byte-identical
// documents.
TEST_F(CliTest, CliAndHttpProduceIdenticalDocuments) {
  replay("compucoin");
  const auto base = load(model);
  ASSERT_EQ(cli(model, {"cell", "reopen", "m1", "external->client"}).status, 0);
  ASSERT_EQ(cli(model, {"cell", "merge", "m1", "external->client", "--into", "client->server", "--why", "w"}).status, 0);
  ASSERT_EQ(cli(model, {"score", "compucoin-theft-underpayment", "--likelihood", "3", "--severity", "4"}).status, 0);
  ASSERT_EQ(cli(model, {"matrix", "gen", "service.denial-of-service"}).status, 0);
  const std::string via_cli = serialize_document(load(model));

  Workbench wb(base, std::nullopt, fixed_clock());
  http::ApiServer server(wb);
  const int port = server.bind_any("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen(); });
  server.wait_until_ready();
  httplib::Client c("127.0.0.1", port);
  auto ok = [](const httplib::Result& r) { return r && r->status == 200; };
  EXPECT_TRUE(ok(c.Post("/api/matrices/m1/cells/external->client/reopen", "", "application/json")));
  EXPECT_TRUE(ok(c.Post("/api/matrices/m1/cells/external->client/merge",
                        R"({"into":"client->server","rationale":"w"})", "application/json")));
  EXPECT_TRUE(ok(c.Post("/api/scenarios/compucoin-theft-underpayment/score",
                        R"({"likelihood":3,"severity":4,"notes":""})", "application/json")));
  EXPECT_TRUE(ok(c.Post("/api/matrices", R"({"category_id":"service.denial-of-service"})", "application/json")));
  server.stop();
  th.join();
  EXPECT_EQ(serialize_document(*wb.snapshot()), via_cli);
}

#ifdef ABC_CLI_BINARY
TEST(CliBinary, ExitStatusAndOutput) {
  test::TempDir dir;
  const std::string bin = ABC_CLI_BINARY;
  const std::string model = (dir / "m.json").string();
  const std::string out = (dir / "out.txt").string();
  auto sh = [&](const std::string& args) {
    return std::system((bin + " -m '" + model + "' " + args + " > '" + out + "' 2>&1").c_str());
  };
  EXPECT_EQ(sh("replay '" + test::fixture_path("bitcoin").string() + "'"), 0);
  EXPECT_EQ(sh("--json stats"), 0);
  EXPECT_EQ(test::read_json(out).at("total_cells"), 105);
  EXPECT_NE(sh("cell eliminate m1 'nobody->miner' --why x"), 0);
  EXPECT_EQ(sh("deposit --cheat 10 --honest 4 --p 1"), 0);
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "min_deposit: 6");
}
#endif

}  // namespace
}  // namespace abc
