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

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vecsql/bench.hpp"
#include "vecsql/executor.hpp"
#include "vecsql/generator.hpp"
#include "vecsql/parser.hpp"
#include "vecsql/render.hpp"
#include "vecsql/transpile.hpp"
#include "vecsql/validate.hpp"

namespace fs = std::filesystem;
using vecsql::Json;

namespace {

// Environment overrides (documented prefix VECSQL_) provide defaults that
// explicit flags still win over.
std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtoull(v, nullptr, 10) : fallback;
}
double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtod(v, nullptr) : fallback;
}
std::string env_str(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Json read_json(const std::string& path) { return Json::parse(read_file(path)); }

int cmd_gen(std::uint64_t seed, const std::string& out_dir, const std::string& cells_file,
            std::size_t papers) {
  vecsql::gen::SeedDataConfig data_cfg;
  data_cfg.seed = seed;
  data_cfg.papers = papers;

  vecsql::gen::WorkloadConfig wl_cfg;
  wl_cfg.seed = seed;
  if (!cells_file.empty()) {
    const Json j = read_json(cells_file);
    if (j.contains("quota_per_cell")) wl_cfg.quota_per_cell = j["quota_per_cell"];
    if (j.contains("oversample")) wl_cfg.oversample = j["oversample"];
    if (j.contains("variants")) wl_cfg.variants = j["variants"];
    if (j.contains("papers")) data_cfg.papers = j["papers"];
    if (j.contains("venues")) data_cfg.venues = j["venues"];
    if (j.contains("authors")) data_cfg.authors = j["authors"];
    if (j.contains("intents")) {
      wl_cfg.intents.clear();
      for (const auto& s : j["intents"]) {
        auto t = vecsql::intent_from_string(s.get<std::string>());
        if (!t) throw std::runtime_error("unknown intent tier in cells file");
        wl_cfg.intents.push_back(*t);
      }
    }
  }

  const vecsql::HybridStore store = vecsql::gen::make_seed_store(data_cfg);
  const auto workload = vecsql::gen::generate_workload(store, wl_cfg);

  fs::create_directories(out_dir);
  store.save((fs::path(out_dir) / "store.json").string());
  vecsql::bench::save_workload((fs::path(out_dir) / "workload.jsonl").string(), workload);
  std::cout << "wrote " << workload.size() << " samples and a "
            << data_cfg.papers << "-paper store under " << out_dir << "\n";
  return 0;
}

int cmd_index_build(const std::string& db, const std::string& out_dir) {
  const vecsql::HybridStore store = vecsql::HybridStore::load(db);
  fs::create_directories(out_dir);
  std::size_t n = 0;
  for (const auto& table : store.schema().tables) {
    const vecsql::TableData* data = store.table(table.name);
    for (std::size_t v = 0; v < table.vector_columns.size(); ++v) {
      const auto path =
          fs::path(out_dir) / (table.name + "." + table.vector_columns[v].name + ".annx");
      data->indexes[v].save(path.string());
      ++n;
    }
  }
  std::cout << "wrote " << n << " index snapshot(s) under " << out_dir << "\n";
  return 0;
}

int cmd_index_stats(const std::string& path) {
  const vecsql::ann::AnnIndex index = vecsql::ann::AnnIndex::load(path);
  const auto s = index.stats();
  Json j{{"count", s.count},
         {"dim", s.dim},
         {"metric", vecsql::to_string(s.metric)},
         {"m", s.params.m},
         {"ef_construction", s.params.ef_construction},
         {"ef_search", s.params.ef_search},
         {"max_degree", s.max_degree},
         {"mean_degree", s.mean_degree},
         {"reachable", s.reachable}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_exec(const std::string& strategy_spec, const std::string& query_file,
             const std::string& db, const std::string& index_dir, double timeout) {
  vecsql::HybridStore store = vecsql::HybridStore::load(db);
  if (!index_dir.empty()) {
    for (const auto& table : store.schema().tables) {
      for (const auto& vc : table.vector_columns) {
        const auto path = fs::path(index_dir) / (table.name + "." + vc.name + ".annx");
        if (fs::exists(path))
          store.attach_index(table.name, vc.name, vecsql::ann::AnnIndex::load(path.string()));
      }
    }
  }
  const vecsql::VectorSqlQuery query = vecsql::sql::parse(read_file(query_file));
  const auto diagnostics = vecsql::validate_query(query, store.schema());
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics)
      std::cerr << "error: " << d.code << ": " << d.message << " [" << d.where << "]\n";
    return 2;
  }
  const auto strategy = vecsql::exec::parse_strategy(strategy_spec);
  const vecsql::ResultSet rs =
      vecsql::exec::execute(store, query, strategy, nullptr, {timeout});
  for (const auto& row : rs.rows) {
    Json values = Json::array();
    for (const auto& v : row.values) values.push_back(vecsql::value_to_json(v));
    Json line{{"id", row.id}, {"values", values}};
    if (row.distance) line["distance"] = *row.distance;
    std::cout << line.dump() << "\n";
  }
  if (rs.truncated) std::cerr << "note: result truncated before reaching k\n";
  return 0;
}

int cmd_transpile(const std::string& dialect_name, const std::string& in_file,
                  const std::string& vectors_file, const std::string& schema_file,
                  const std::string& placeholders_file) {
  const auto dialect = vecsql::sql::dialect_from_string(dialect_name);
  if (!dialect) {
    std::cerr << "error: unknown dialect '" << dialect_name << "'\n";
    return 2;
  }
  const vecsql::VectorSqlQuery query = vecsql::sql::parse(read_file(in_file));
  std::map<std::string, vecsql::Vector> embedded;
  if (!vectors_file.empty()) {
    const Json vecs = read_json(vectors_file);  // keep alive across items()
    for (const auto& [text, arr] : vecs.items())
      embedded.emplace(text, vecsql::vector_from_json(arr));
  }
  std::optional<vecsql::HybridSchema> schema;
  if (!schema_file.empty()) schema = vecsql::schema_from_json(read_json(schema_file));

  const auto out =
      vecsql::sql::transpile(query, *dialect, embedded, schema ? &*schema : nullptr);
  std::cout << out.sql << "\n";
  if (!placeholders_file.empty()) {
    Json arr = Json::array();
    for (const auto& p : out.placeholders) {
      Json j{{"text", p.text}, {"column", p.column.column}};
      if (!p.column.table.empty()) j["table"] = p.column.table;
      arr.push_back(std::move(j));
    }
    std::ofstream f(placeholders_file, std::ios::trunc);
    f << arr.dump(2) << "\n";
  }
  return 0;
}

int cmd_score(const std::string& pred_file, const std::string& gold_file, std::size_t k,
              const std::string& out_file, const std::string& csv_file) {
  const auto gold = vecsql::bench::load_workload(gold_file);
  std::map<std::string, Json> preds;
  {
    std::ifstream in(pred_file);
    if (!in) throw std::runtime_error("cannot open: " + pred_file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j = Json::parse(line);
      std::string id = j.at("id").get<std::string>();  // before j moves away
      preds[std::move(id)] = std::move(j);
    }
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file, std::ios::trunc);
    out = &file;
  }

  std::ofstream csv;
  if (!csv_file.empty()) {
    csv.open(csv_file, std::ios::trunc);
    csv << "id," << vecsql::metrics::score_report_csv_header() << "\n";
  }

  const auto embedder = vecsql::default_embedder();
  for (const auto& sample : gold) {
    vecsql::metrics::ScoreReport report;
    auto it = preds.find(sample.id);
    if (it != preds.end()) {
      const Json& pj = it->second;
      if (pj.contains("result")) {
        const vecsql::ResultSet pred_rs = vecsql::result_set_from_json(pj["result"]);
        report.execution_success = true;
        const auto ss = vecsql::metrics::set_scores(pred_rs.ids(), sample.golden.ids());
        report.precision = ss.precision;
        report.recall = ss.recall;
        report.f1 = ss.f1;
        const std::size_t kk = k > 0 ? k : std::max<std::size_t>(1, sample.reference_k);
        report.ndcg_at_k = vecsql::metrics::ndcg_at_k(pred_rs.ids(), sample.golden.ids(), kk);
      }
      if (pj.contains("vectorsql")) {
        try {
          const auto pred_q = vecsql::sql::parse(pj["vectorsql"].get<std::string>());
          const auto gold_q = vecsql::sql::parse(sample.vectorsql);
          report.acc_sql = vecsql::metrics::acc_sql(pred_q, gold_q);
          std::vector<vecsql::ColumnRef> gold_cols;
          for (const auto* vc : vecsql::collect_vector_clauses(gold_q))
            gold_cols.push_back(vc->column);
          std::vector<std::string> pred_kws;
          if (pj.contains("keywords"))
            pred_kws = pj["keywords"].get<std::vector<std::string>>();
          else
            for (const auto* vc : vecsql::collect_vector_clauses(pred_q))
              if (vc->is_embed()) pred_kws.push_back(vc->embed_text());
          if (!sample.keywords.empty())
            report.acc_vec = vecsql::metrics::acc_vec(pred_q, gold_cols, pred_kws,
                                                      sample.keywords, *embedder);
        } catch (const vecsql::sql::ParseError&) {
          report.acc_sql = 0;  // unparseable prediction
        }
      }
    }
    Json line{{"id", sample.id}, {"report", vecsql::metrics::score_report_to_json(report)}};
    (*out) << line.dump() << "\n";
    if (csv.is_open())
      csv << sample.id << "," << vecsql::metrics::score_report_csv_row(report) << "\n";
  }
  return 0;
}

int cmd_bench(vecsql::bench::RunConfig config) {
  const auto result = vecsql::bench::run_benchmark_files(config);
  std::size_t failures = 0;
  for (const auto& s : result.scores)
    if (!s.error.empty()) ++failures;
  std::cout << vecsql::bench::aggregate_csv(result.aggregate);
  std::cout << "# " << result.scores.size() << " executions, " << failures
            << " recorded error(s); reports under " << config.out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& scores_file, const std::string& out_file) {
  std::vector<vecsql::bench::SampleScore> scores;
  std::ifstream in(scores_file);
  if (!in) throw std::runtime_error("cannot open: " + scores_file);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    scores.push_back(vecsql::bench::sample_score_from_json(Json::parse(line)));
  }
  const auto table = vecsql::bench::report_degradation(scores);
  const std::string csv = vecsql::bench::degradation_csv(table);
  if (out_file.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_file, std::ios::trunc);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vecsql: hybrid vector + SQL query engine, workload generator and benchmark"};
  app.require_subcommand(1);

  std::uint64_t seed = env_u64("VECSQL_SEED", 42);
  double timeout = env_double("VECSQL_TIMEOUT", 60.0);
  std::size_t workers = env_u64("VECSQL_WORKERS", 1);
  std::string out_dir = env_str("VECSQL_OUT", "out");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded store and stratified workload");
  std::string cells_file;
  std::size_t papers = 1000;
  gen->add_option("--seed", seed, "generation seed");
  gen->add_option("--cells", cells_file, "JSON config: quotas, variants, intents, sizes");
  gen->add_option("--papers", papers, "base table row count");
  gen->add_option("--out", out_dir, "output directory");

  // index
  auto* index = app.add_subcommand("index", "index snapshot tools");
  index->require_subcommand(1);
  auto* ib = index->add_subcommand("build", "build .annx snapshots from a store");
  std::string db_path, index_out, index_file;
  ib->add_option("--db", db_path, "store snapshot (JSON)")->required();
  ib->add_option("--out", index_out, "output directory")->required();
  auto* is = index->add_subcommand("stats", "print snapshot statistics");
  is->add_option("--index", index_file, ".annx file")->required();

  // exec
  auto* ex = app.add_subcommand("exec", "run one query against a store snapshot");
  std::string strategy_spec = "pre", query_file, exec_index_dir;
  ex->add_option("--strategy", strategy_spec, "pre | post[:k'|:xM] | iter:batch,max");
  ex->add_option("--query", query_file, "file with one canonical VectorSQL statement")
      ->required();
  ex->add_option("--db", db_path, "store snapshot (JSON)")->required();
  ex->add_option("--index", exec_index_dir, "directory of .annx snapshots (skips rebuild)");
  ex->add_option("--timeout", timeout, "per-query timeout in seconds");

  // score
  auto* sc = app.add_subcommand("score", "score prediction JSONL against a gold workload");
  std::string pred_file, gold_file, score_out;
  std::size_t score_k = 0;
  sc->add_option("--pred", pred_file, "JSONL: {id, vectorsql?, result?, keywords?}")
      ->required();
  sc->add_option("--gold", gold_file, "gold workload JSONL")->required();
  sc->add_option("--k", score_k, "nDCG cutoff (default: each sample's reference k)");
  sc->add_option("--out", score_out, "output file (default stdout)");
  std::string score_csv;
  sc->add_option("--csv", score_csv, "also write reports as CSV rows here");

  // transpile
  auto* tr = app.add_subcommand("transpile", "emit backend SQL for a canonical query");
  std::string dialect_name, in_file, vectors_file, schema_file, placeholders_file;
  tr->add_option("--dialect", dialect_name, "sqlite-vec | pgvector | clickhouse | canonical")
      ->required();
  tr->add_option("--in", in_file, "file with one canonical VectorSQL statement")->required();
  tr->add_option("--vectors", vectors_file, "JSON map of EMBED text -> vector");
  tr->add_option("--schema", schema_file, "schema JSON (resolves column metrics)");
  tr->add_option("--placeholders", placeholders_file, "write the placeholder list here");

  // bench
  auto* be = app.add_subcommand("bench", "run a strategy sweep over a workload");
  std::string config_file, workload_file;
  std::vector<std::string> strategies;
  be->add_option("--config", config_file, "RunConfig JSON (flags override)");
  be->add_option("--db", db_path, "store snapshot (JSON)");
  be->add_option("--workload", workload_file, "workload JSONL");
  be->add_option("--strategy", strategies, "strategy spec (repeatable)");
  be->add_option("--seed", seed, "run seed");
  be->add_option("--timeout", timeout, "per-query timeout in seconds");
  be->add_option("--workers", workers, "concurrent sample executions");
  be->add_option("--out", out_dir, "report directory");

  // report
  auto* rp = app.add_subcommand("report", "degradation table from per-sample scores");
  std::string scores_file, report_out;
  rp->add_option("--scores", scores_file, "scores.jsonl from a bench run")->required();
  rp->add_option("--out", report_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(seed, out_dir, cells_file, papers);
    if (index->parsed()) {
      if (ib->parsed()) return cmd_index_build(db_path, index_out);
      return cmd_index_stats(index_file);
    }
    if (ex->parsed()) return cmd_exec(strategy_spec, query_file, db_path, exec_index_dir,
                                      timeout);
    if (sc->parsed()) return cmd_score(pred_file, gold_file, score_k, score_out, score_csv);
    if (tr->parsed())
      return cmd_transpile(dialect_name, in_file, vectors_file, schema_file, placeholders_file);
    if (be->parsed()) {
      vecsql::bench::RunConfig config;
      if (!config_file.empty()) config = vecsql::bench::run_config_from_json(read_json(config_file));
      if (!db_path.empty()) config.store_path = db_path;
      if (!workload_file.empty()) config.workload_path = workload_file;
      if (!strategies.empty()) config.strategies = strategies;
      if (be->count("--seed")) config.seed = seed;
      if (be->count("--timeout")) config.timeout_seconds = timeout;
      if (be->count("--workers")) config.workers = workers;
      if (be->count("--out") || config.out_dir.empty()) config.out_dir = out_dir;
      if (config.store_path.empty() || config.workload_path.empty()) {
        std::cerr << "error: bench needs --db and --workload (or a --config file)\n";
        return 2;
      }
      return cmd_bench(std::move(config));
    }
    if (rp->parsed()) return cmd_report(scores_file, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
