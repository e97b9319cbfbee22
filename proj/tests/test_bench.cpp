// Copyright 2026-present the vecsql authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "vecsql/bench.hpp"
#include "vecsql/generator.hpp"

using namespace vecsql;
using namespace vecsql::bench;

namespace {

struct Corpus {
  HybridStore store;
  std::vector<BenchmarkSample> workload;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    HybridStore store = gen::make_seed_store({.seed = 71, .papers = 300});
    gen::WorkloadConfig cfg;
    cfg.seed = 71;
    cfg.quota_per_cell = 1;
    cfg.oversample = 1;
    cfg.variants = 2;
    auto workload = gen::generate_workload(store, cfg);
    return Corpus{std::move(store), std::move(workload)};
  }();
  return c;
}

}  // namespace

TEST_CASE("run_benchmark scores every sample under every strategy") {
  RunConfig config;
  config.strategies = {"pre", "post:x1", "iter:5,6"};
  const BenchResult result = run_benchmark(corpus().store, corpus().workload, config);

  CHECK(result.scores.size() == corpus().workload.size() * 3);
  for (const auto& s : result.scores) {
    CAPTURE(s.sample_id);
    CHECK(s.error.empty());
    CHECK(s.report.execution_success);
    if (s.strategy == "pre") {
      CHECK(s.report.recall == doctest::Approx(1.0));
      CHECK(s.report.precision == doctest::Approx(1.0));
    }
    // the canonical query scored against itself keeps the ceilings
    CHECK(s.report.acc_sql == 1);
  }
  CHECK(result.aggregate.size() == 9);  // 3 strategies x 3 integration depths

  SUBCASE("aggregate rows recompute from per-sample scores to 1e-12") {
    for (const auto& row : result.aggregate) {
      double p = 0, r = 0, f = 0;
      std::size_t n = 0;
      for (const auto& s : result.scores) {
        if (s.strategy != row.strategy || !s.error.empty()) continue;
        if (s.label.integration != row.integration) continue;
        ++n;
        p += s.report.precision;
        r += s.report.recall;
        f += s.report.f1;
      }
      REQUIRE(n == row.n);
      if (n > 0) {
        CHECK(std::abs(row.precision - p / n) <= 1e-12);
        CHECK(std::abs(row.recall - r / n) <= 1e-12);
        CHECK(std::abs(row.f1 - f / n) <= 1e-12);
      }
    }
  }
  SUBCASE("worker count does not change results") {
    RunConfig parallel = config;
    parallel.workers = 4;
    const BenchResult again = run_benchmark(corpus().store, corpus().workload, parallel);
    CHECK(aggregate_csv(again.aggregate) == aggregate_csv(result.aggregate));
  }
}

TEST_CASE("bad samples are recorded, never fatal") {
  std::vector<BenchmarkSample> workload = {};
  BenchmarkSample bad;
  bad.id = "bad1";
  bad.vectorsql = "SELECT FROM WHERE (((";
  bad.golden.columns = {"id"};
  bad.golden.rows.push_back({1, {Value{std::int64_t{1}}}, std::nullopt});
  bad.reference_k = 5;
  workload.push_back(std::move(bad));

  RunConfig config;
  config.strategies = {"pre"};
  const BenchResult result = run_benchmark(corpus().store, workload, config);
  REQUIRE(result.scores.size() == 1);
  CHECK_FALSE(result.scores[0].error.empty());
  CHECK_FALSE(result.scores[0].report.execution_success);
}

TEST_CASE("degradation table shape and ordering") {
  RunConfig config;
  config.strategies = {"pre", "post:x1"};
  const BenchResult result = run_benchmark(corpus().store, corpus().workload, config);
  const DegradationTable t = report_degradation(result.scores);
  REQUIRE(t.strategies == std::vector<std::string>{"pre", "post:x1"});
  // PreFilter recall columns are 1.0 wherever the cell has samples
  for (int d = 0; d < 3; ++d) {
    if (t.counts[0][d] == 0) continue;
    CHECK(t.values[0][d * 3 + 1] == doctest::Approx(1.0));
  }
  const std::string csv = degradation_csv(t);
  CHECK(csv.rfind("strategy,non_p,non_r,non_f1,where_p,where_r,where_f1,join_p,join_r,join_f1",
                  0) == 0);
  CHECK_THROWS(report_degradation({}));
}

TEST_CASE("file round trips and end-to-end determinism") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "vecsql_bench_test";
  fs::remove_all(base);
  fs::create_directories(base);

  const fs::path store_path = base / "store.json";
  const fs::path workload_path = base / "workload.jsonl";
  corpus().store.save(store_path.string());
  save_workload(workload_path.string(), corpus().workload);

  const auto loaded = load_workload(workload_path.string());
  REQUIRE(loaded.size() == corpus().workload.size());
  CHECK(loaded[0].vectorsql == corpus().workload[0].vectorsql);
  CHECK(loaded[0].golden == corpus().workload[0].golden);

  RunConfig config;
  config.store_path = store_path.string();
  config.workload_path = workload_path.string();
  config.strategies = {"pre", "post:x1"};

  config.out_dir = (base / "run1").string();
  run_benchmark_files(config);
  config.out_dir = (base / "run2").string();
  run_benchmark_files(config);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const std::string a = slurp(base / "run1" / "aggregate.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(base / "run2" / "aggregate.csv"));
  CHECK(slurp(base / "run1" / "scores.jsonl") == slurp(base / "run2" / "scores.jsonl"));
  CHECK(slurp(base / "run1" / "degradation.csv") == slurp(base / "run2" / "degradation.csv"));
  fs::remove_all(base);
}

TEST_CASE("run config JSON") {
  RunConfig c;
  c.seed = 7;
  c.store_path = "s.json";
  c.workload_path = "w.jsonl";
  c.strategies = {"pre", "iter:2,3"};
  c.timeout_seconds = 30;
  c.workers = 2;
  c.out_dir = "out";
  const RunConfig back = run_config_from_json(run_config_to_json(c));
  CHECK(back.seed == c.seed);
  CHECK(back.strategies == c.strategies);
  CHECK(back.timeout_seconds == c.timeout_seconds);
  CHECK_THROWS(run_config_from_json(Json{{"strategies", Json::array()}}));
}
