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

#include "vecsql/bench.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "vecsql/executor.hpp"
#include "vecsql/parser.hpp"
#include "vecsql/validate.hpp"

namespace vecsql::bench {

Json run_config_to_json(const RunConfig& c) {
  return Json{{"seed", c.seed},
              {"store", c.store_path},
              {"workload", c.workload_path},
              {"strategies", c.strategies},
              {"timeout_seconds", c.timeout_seconds},
              {"workers", c.workers},
              {"out_dir", c.out_dir}};
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("store")) c.store_path = j["store"].get<std::string>();
  if (j.contains("workload")) c.workload_path = j["workload"].get<std::string>();
  if (j.contains("strategies")) c.strategies = j["strategies"].get<std::vector<std::string>>();
  if (j.contains("timeout_seconds")) c.timeout_seconds = j["timeout_seconds"].get<double>();
  if (j.contains("workers")) c.workers = j["workers"].get<std::size_t>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (c.strategies.empty()) throw std::invalid_argument("strategy list must be non-empty");
  if (!(c.timeout_seconds > 0)) throw std::invalid_argument("timeout must be positive");
  return c;
}

Json sample_score_to_json(const SampleScore& s) {
  Json j{{"id", s.sample_id},
         {"strategy", s.strategy},
         {"label", label_to_json(s.label)},
         {"report", metrics::score_report_to_json(s.report)}};
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

SampleScore sample_score_from_json(const Json& j) {
  SampleScore s;
  s.sample_id = j.at("id").get<std::string>();
  s.strategy = j.at("strategy").get<std::string>();
  s.label = label_from_json(j.at("label"));
  s.report = metrics::score_report_from_json(j.at("report"));
  s.error = j.value("error", std::string());
  return s;
}

namespace {

SampleScore score_one(const HybridStore& store, const BenchmarkSample& sample,
                      const std::string& strategy_spec, double timeout) {
  SampleScore out;
  out.sample_id = sample.id;
  out.strategy = strategy_spec;
  out.label = sample.label;
  try {
    const exec::ExecStrategy strategy = exec::parse_strategy(strategy_spec);
    const exec::ExecOptions options{timeout};
    const VectorSqlQuery query = sql::parse(sample.vectorsql);

    const exec::RecallReport rr = exec::measure_recall(store, query, strategy, nullptr, options);
    out.report.precision = rr.precision;
    out.report.recall = rr.recall;
    out.report.f1 = (rr.precision + rr.recall) == 0.0
                        ? 0.0
                        : 2.0 * rr.precision * rr.recall / (rr.precision + rr.recall);

    const ResultSet rs = exec::execute(store, query, strategy, nullptr, options);
    const std::size_t k =
        sample.reference_k > 0 ? static_cast<std::size_t>(sample.reference_k) : 10;
    out.report.ndcg_at_k = metrics::ndcg_at_k(rs.ids(), sample.golden.ids(), k);

    // the executed query IS the gold query here; the decomposed accuracies
    // exist for scoring external predictions and stay at their ceiling
    const VectorSqlQuery gold = sql::parse(sample.vectorsql);
    out.report.acc_sql = metrics::acc_sql(query, gold);
    std::vector<ColumnRef> gold_cols;
    for (const VectorClause* vc : collect_vector_clauses(gold)) gold_cols.push_back(vc->column);
    if (!sample.keywords.empty())
      out.report.acc_vec = metrics::acc_vec(query, gold_cols, sample.keywords, sample.keywords,
                                            *store.embedder());
    out.report.execution_success = true;
  } catch (const std::exception& e) {
    out.error = e.what();
    out.report = metrics::ScoreReport{};
  }
  return out;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// strategy specs may carry commas (iter:batch,max); quote per CSV rules
std::string csv_field(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

BenchResult run_benchmark(const HybridStore& store, const std::vector<BenchmarkSample>& workload,
                          const RunConfig& config) {
  if (config.strategies.empty()) throw std::invalid_argument("strategy list must be non-empty");
  if (!(config.timeout_seconds > 0)) throw std::invalid_argument("timeout must be positive");

  struct Task {
    std::size_t strategy_idx;
    std::size_t sample_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.strategies.size(); ++s)
    for (std::size_t i = 0; i < workload.size(); ++i) tasks.push_back({s, i});

  BenchResult result;
  result.scores.resize(tasks.size());

  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      const std::size_t t = cursor.fetch_add(1);
      if (t >= tasks.size()) break;
      const Task& task = tasks[t];
      result.scores[t] = score_one(store, workload[task.sample_idx],
                                   config.strategies[task.strategy_idx],
                                   config.timeout_seconds);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // aggregation is single-threaded over the deterministic task order
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    for (int depth = 0; depth < 3; ++depth) {
      AggregateRow row;
      row.strategy = config.strategies[s];
      row.integration = static_cast<IntegrationDepth>(depth);
      double p = 0, r = 0, f = 0;
      for (std::size_t i = 0; i < workload.size(); ++i) {
        const SampleScore& sc = result.scores[s * workload.size() + i];
        if (!sc.error.empty()) continue;
        if (sc.label.integration != row.integration) continue;
        ++row.n;
        p += sc.report.precision;
        r += sc.report.recall;
        f += sc.report.f1;
      }
      if (row.n > 0) {
        row.precision = p / static_cast<double>(row.n);
        row.recall = r / static_cast<double>(row.n);
        row.f1 = f / static_cast<double>(row.n);
      }
      result.aggregate.push_back(row);
    }
  }
  return result;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "strategy,integration,n,precision,recall,f1\n";
  for (const auto& r : rows) {
    out += csv_field(r.strategy) + "," + to_string(r.integration) + "," + std::to_string(r.n) +
           "," + fixed6(r.precision) + "," + fixed6(r.recall) + "," + fixed6(r.f1) + "\n";
  }
  return out;
}

DegradationTable report_degradation(const std::vector<SampleScore>& scores) {
  if (scores.empty()) throw std::invalid_argument("report_degradation: no scores");
  DegradationTable t;
  for (const auto& s : scores) {
    if (std::find(t.strategies.begin(), t.strategies.end(), s.strategy) == t.strategies.end())
      t.strategies.push_back(s.strategy);
  }
  t.values.assign(t.strategies.size(), {});
  t.counts.assign(t.strategies.size(), {});
  std::vector<std::array<double, 9>> sums(t.strategies.size(), std::array<double, 9>{});
  for (const auto& s : scores) {
    if (!s.error.empty()) continue;
    const std::size_t row =
        std::find(t.strategies.begin(), t.strategies.end(), s.strategy) - t.strategies.begin();
    const int d = static_cast<int>(s.label.integration);
    sums[row][d * 3 + 0] += s.report.precision;
    sums[row][d * 3 + 1] += s.report.recall;
    sums[row][d * 3 + 2] += s.report.f1;
    t.counts[row][d] += 1;
  }
  for (std::size_t r = 0; r < t.strategies.size(); ++r) {
    for (int d = 0; d < 3; ++d) {
      const std::size_t n = t.counts[r][d];
      for (int m = 0; m < 3; ++m)
        t.values[r][d * 3 + m] = n ? sums[r][d * 3 + m] / static_cast<double>(n) : 0.0;
    }
  }
  return t;
}

std::string degradation_csv(const DegradationTable& t) {
  std::string out =
      "strategy,non_p,non_r,non_f1,where_p,where_r,where_f1,join_p,join_r,join_f1\n";
  for (std::size_t r = 0; r < t.strategies.size(); ++r) {
    out += csv_field(t.strategies[r]);
    for (int c = 0; c < 9; ++c) out += "," + fixed6(t.values[r][c]);
    out += "\n";
  }
  return out;
}

void save_workload(const std::string& path, const std::vector<BenchmarkSample>& samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& s : samples) out << sample_to_json(s).dump() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<BenchmarkSample> load_workload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload: " + path);
  std::vector<BenchmarkSample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(sample_from_json(Json::parse(line)));
  }
  return out;
}

BenchResult run_benchmark_files(const RunConfig& config) {
  const HybridStore store = HybridStore::load(config.store_path);
  const std::vector<BenchmarkSample> workload = load_workload(config.workload_path);
  BenchResult result = run_benchmark(store, workload, config);

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  {
    std::ofstream out(fs::path(config.out_dir) / "scores.jsonl", std::ios::trunc);
    for (const auto& s : result.scores) out << sample_score_to_json(s).dump() << "\n";
  }
  {
    std::ofstream out(fs::path(config.out_dir) / "aggregate.csv", std::ios::trunc);
    out << aggregate_csv(result.aggregate);
  }
  {
    std::ofstream out(fs::path(config.out_dir) / "degradation.csv", std::ios::trunc);
    out << degradation_csv(report_degradation(result.scores));
  }
  return result;
}

}  // namespace vecsql::bench
