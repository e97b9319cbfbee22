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

#pragma once

#include <array>
#include <string>
#include <vector>

#include "vecsql/label.hpp"
#include "vecsql/metrics.hpp"
#include "vecsql/store.hpp"

namespace vecsql::bench {

struct RunConfig {
  std::uint64_t seed = 42;
  std::string store_path;
  std::string workload_path;
  std::vector<std::string> strategies = {"pre", "post:x1", "iter:10,12"};
  double timeout_seconds = 60.0;
  std::size_t workers = 1;
  std::string out_dir;
};

Json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

/// One (sample x strategy) outcome. Errors are recorded, never fatal.
struct SampleScore {
  std::string sample_id;
  std::string strategy;
  ComplexityLabel label;
  metrics::ScoreReport report;
  std::string error;  // empty on success
};

Json sample_score_to_json(const SampleScore& s);
SampleScore sample_score_from_json(const Json& j);

struct AggregateRow {
  std::string strategy;
  IntegrationDepth integration = IntegrationDepth::Non;
  std::size_t n = 0;  // successfully executed samples
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct BenchResult {
  std::vector<SampleScore> scores;      // (strategy order, sample id) order
  std::vector<AggregateRow> aggregate;  // strategy order x {Non, Where, Join}
};

/// Rows in `aggregate` are means over successful executions; deterministic
/// under a fixed config (fixed float formatting, stable ordering, no wall
/// clock anywhere in the output).
BenchResult run_benchmark(const HybridStore& store, const std::vector<BenchmarkSample>& workload,
                          const RunConfig& config);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);

/// Fig.-5-shaped grouped table: one row per strategy, columns
/// {non,where,join} x {precision,recall,f1}. Throws on empty input.
struct DegradationTable {
  std::vector<std::string> strategies;
  std::vector<std::array<double, 9>> values;  // per strategy row
  std::vector<std::array<std::size_t, 3>> counts;
};

DegradationTable report_degradation(const std::vector<SampleScore>& scores);
std::string degradation_csv(const DegradationTable& t);

/// Filesystem front door used by the CLI: loads the store and workload,
/// runs every (sample x strategy), and writes scores.jsonl, aggregate.csv
/// and degradation.csv under config.out_dir.
BenchResult run_benchmark_files(const RunConfig& config);

// workload JSONL
void save_workload(const std::string& path, const std::vector<BenchmarkSample>& samples);
std::vector<BenchmarkSample> load_workload(const std::string& path);

}  // namespace vecsql::bench
