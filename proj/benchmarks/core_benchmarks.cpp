#include <benchmark/benchmark.h>

#include <fstream>
#include <string>

#include "abc/abc.hpp"

namespace {

using namespace abc;

ThreatModel model_with_roles(std::size_t roles) {
  ThreatModel m = init_model({}, "bench");
  for (std::size_t i = 0; i < roles; ++i) m = upsert_role(m, Role{"r" + std::to_string(i), ""});
  Asset a;
  a.name = "asset";
  a.security_requirements = {{"req", "the asset behaves", "violation"}};
  m = upsert_asset(m, a);
  return derive_all(m, Catalog{});
}

std::vector<Operation> fixture_operations(const std::string& name) {
  std::ifstream in(std::string(ABC_BENCH_DATA_DIR) + "/fixtures/" + name + ".json");
  return operations_from_json(Json::parse(in));
}

ModelDocument record_all(const std::vector<Operation>& ops) {
  ModelDocument doc;
  for (const auto& op : ops) doc = record(doc, op, "2024-01-01T00:00:00Z");
  return doc;
}

void BM_CellCount(benchmark::State& state) {
  std::uint64_t n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_count(n));
    n = n % 30 + 1;
  }
}
BENCHMARK(BM_CellCount);

void BM_GenerateMatrix(benchmark::State& state) {
  const auto roles = static_cast<std::size_t>(state.range(0));
  const ThreatModel m = model_with_roles(roles);
  for (auto _ : state) {
    auto matrix = generate_matrix(m, "asset.violation");
    benchmark::DoNotOptimize(matrix);
  }
  state.counters["cells"] = static_cast<double>(cell_count(roles));
}
BENCHMARK(BM_GenerateMatrix)->DenseRange(1, 6);

void BM_RenderMatrixText(benchmark::State& state) {
  const auto roles = static_cast<std::size_t>(state.range(0));
  const ThreatModel m = add_matrix(model_with_roles(roles), "asset.violation");
  for (auto _ : state) benchmark::DoNotOptimize(render_matrix_text(m.matrices[0]));
}
BENCHMARK(BM_RenderMatrixText)->DenseRange(1, 5);

void BM_ReplayFixture(benchmark::State& state, const std::string& name) {
  const ModelDocument doc = record_all(fixture_operations(name));
  for (auto _ : state) benchmark::DoNotOptimize(replay(doc.audit_log));
  state.counters["ops"] = static_cast<double>(doc.audit_log.size());
}
BENCHMARK_CAPTURE(BM_ReplayFixture, compucoin, std::string("compucoin"));
BENCHMARK_CAPTURE(BM_ReplayFixture, bitcoin, std::string("bitcoin"));

void BM_Serialize(benchmark::State& state) {
  const ModelDocument doc = record_all(fixture_operations("bitcoin"));
  for (auto _ : state) benchmark::DoNotOptimize(serialize_document(doc));
}
BENCHMARK(BM_Serialize);

}  // namespace

BENCHMARK_MAIN();
