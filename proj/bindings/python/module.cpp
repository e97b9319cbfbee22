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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vecsql/bench.hpp"
#include "vecsql/executor.hpp"
#include "vecsql/generator.hpp"
#include "vecsql/parser.hpp"
#include "vecsql/render.hpp"
#include "vecsql/transpile.hpp"
#include "vecsql/validate.hpp"

namespace py = pybind11;
using vecsql::Json;

namespace {

py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
      return out;
    }
    default: return py::none();
  }
}

// Parsed query handle: keeps the AST alive behind a simple facade.
struct PyQuery {
  vecsql::VectorSqlQuery query;

  std::string render() const { return vecsql::sql::render_canonical(query); }
  std::string make_template() const { return vecsql::sql::canonical_template(query); }
  py::object to_obj() const { return json_to_py(vecsql::query_to_json(query)); }
  py::dict classify() const {
    const auto r = vecsql::gen::classify(query);
    py::dict out;
    out["structural"] = vecsql::to_string(r.structural);
    out["integration"] = vecsql::to_string(r.integration);
    out["plain_sql"] = r.plain_sql;
    return out;
  }
};

struct PyStore {
  std::shared_ptr<vecsql::HybridStore> store;

  static PyStore load(const std::string& path) {
    return PyStore{std::make_shared<vecsql::HybridStore>(vecsql::HybridStore::load(path))};
  }
  static PyStore seeded(std::uint64_t seed, std::size_t papers) {
    vecsql::gen::SeedDataConfig cfg;
    cfg.seed = seed;
    cfg.papers = papers;
    return PyStore{std::make_shared<vecsql::HybridStore>(vecsql::gen::make_seed_store(cfg))};
  }

  void save(const std::string& path) const { store->save(path); }
  py::object schema() const { return json_to_py(vecsql::schema_to_json(store->schema())); }

  py::object execute(const std::string& sql, const std::string& strategy,
                     double timeout) const {
    const auto query = vecsql::sql::parse(sql);
    const auto strat = vecsql::exec::parse_strategy(strategy);
    const auto rs = vecsql::exec::execute(*store, query, strat, nullptr, {timeout});
    return json_to_py(vecsql::result_set_to_json(rs));
  }

  py::dict measure_recall(const std::string& sql, const std::string& strategy,
                          double timeout) const {
    const auto query = vecsql::sql::parse(sql);
    const auto strat = vecsql::exec::parse_strategy(strategy);
    const auto r = vecsql::exec::measure_recall(*store, query, strat, nullptr, {timeout});
    py::dict out;
    out["precision"] = r.precision;
    out["recall"] = r.recall;
    out["result_size"] = r.result_size;
    out["truth_size"] = r.truth_size;
    return out;
  }

  py::list validate(const std::string& sql) const {
    const auto query = vecsql::sql::parse(sql);
    py::list out;
    for (const auto& d : vecsql::validate_query(query, store->schema())) {
      py::dict item;
      item["code"] = d.code;
      item["message"] = d.message;
      item["where"] = d.where;
      out.append(item);
    }
    return out;
  }

  std::string synthesize(const std::string& structural, const std::string& integration,
                         const std::string& intent, std::uint64_t seed) const {
    vecsql::gen::ComplexityTarget target;
    auto st = vecsql::structural_tier_from_string(structural);
    auto in = vecsql::integration_from_string(integration);
    auto it = vecsql::intent_from_string(intent);
    if (!st || !in || !it) throw std::invalid_argument("unknown complexity tier name");
    target.structural = *st;
    target.integration = *in;
    target.intent = *it;
    return vecsql::sql::render_canonical(vecsql::gen::synthesize_query(*store, target, seed));
  }

  py::list workload(std::uint64_t seed, std::size_t quota_per_cell, std::size_t variants) const {
    vecsql::gen::WorkloadConfig cfg;
    cfg.seed = seed;
    cfg.quota_per_cell = quota_per_cell;
    cfg.variants = variants;
    py::list out;
    for (const auto& s : vecsql::gen::generate_workload(*store, cfg))
      out.append(json_to_py(vecsql::sample_to_json(s)));
    return out;
  }
};

}  // namespace

PYBIND11_MODULE(_vecsql, m) {
  m.doc() = "vecsql: hybrid vector + SQL query engine, metrics and workload generator";

  py::register_exception<vecsql::sql::ParseError>(m, "ParseError");
  py::register_exception<vecsql::exec::ExecError>(m, "ExecError");

  py::class_<PyQuery>(m, "Query")
      .def("render", &PyQuery::render)
      .def("template", &PyQuery::make_template)
      .def("to_obj", &PyQuery::to_obj)
      .def("classify", &PyQuery::classify);

  m.def("parse", [](const std::string& text) { return PyQuery{vecsql::sql::parse(text)}; },
        py::arg("text"), "Parse canonical VectorSQL into a Query handle");

  m.def(
      "transpile",
      [](const PyQuery& q, const std::string& dialect,
         const std::map<std::string, std::vector<double>>& vectors) {
        auto d = vecsql::sql::dialect_from_string(dialect);
        if (!d) throw std::invalid_argument("unknown dialect: " + dialect);
        std::map<std::string, vecsql::Vector> embedded;
        for (const auto& [text, comps] : vectors) embedded.emplace(text, vecsql::Vector{comps});
        const auto out = vecsql::sql::transpile(q.query, *d, embedded);
        py::dict r;
        r["sql"] = out.sql;
        py::list ph;
        for (const auto& p : out.placeholders) {
          py::dict e;
          e["text"] = p.text;
          e["column"] = p.column.column;
          ph.append(e);
        }
        r["placeholders"] = ph;
        return r;
      },
      py::arg("query"), py::arg("dialect"), py::arg("vectors") = std::map<std::string, std::vector<double>>{});

  py::class_<PyStore>(m, "Store")
      .def_static("load", &PyStore::load, py::arg("path"))
      .def_static("seeded", &PyStore::seeded, py::arg("seed") = 42, py::arg("papers") = 1000)
      .def("save", &PyStore::save, py::arg("path"))
      .def("schema", &PyStore::schema)
      .def("execute", &PyStore::execute, py::arg("sql"), py::arg("strategy") = "pre",
           py::arg("timeout") = 60.0)
      .def("measure_recall", &PyStore::measure_recall, py::arg("sql"), py::arg("strategy"),
           py::arg("timeout") = 60.0)
      .def("validate", &PyStore::validate, py::arg("sql"))
      .def("synthesize", &PyStore::synthesize, py::arg("structural"), py::arg("integration"),
           py::arg("intent") = "entity", py::arg("seed") = 0)
      .def("workload", &PyStore::workload, py::arg("seed") = 42, py::arg("quota_per_cell") = 1,
           py::arg("variants") = 3);

  m.def("set_scores", [](const std::vector<std::int64_t>& pred,
                         const std::vector<std::int64_t>& gold) {
    const auto s = vecsql::metrics::set_scores(pred, gold);
    return py::make_tuple(s.precision, s.recall, s.f1);
  });
  m.def("ndcg_at_k", [](const std::vector<std::int64_t>& pred,
                        const std::vector<std::int64_t>& gold,
                        std::size_t k) { return vecsql::metrics::ndcg_at_k(pred, gold, k); });
  m.def("rrf_fuse",
        [](const std::vector<std::vector<std::int64_t>>& rankings, double c) {
          return vecsql::metrics::rrf_fuse(rankings, c);
        },
        py::arg("rankings"), py::arg("c") = 60.0);
  m.def("acc_sql", [](const std::string& pred, const std::string& gold) {
    return vecsql::metrics::acc_sql(vecsql::sql::parse(pred), vecsql::sql::parse(gold));
  });
  m.def("acc_vec", [](const std::string& pred, const std::string& gold,
                      const std::vector<std::string>& pred_keywords,
                      const std::vector<std::string>& gold_keywords) {
    const auto pq = vecsql::sql::parse(pred);
    const auto gq = vecsql::sql::parse(gold);
    std::vector<vecsql::ColumnRef> gold_cols;
    for (const auto* vc : vecsql::collect_vector_clauses(gq)) gold_cols.push_back(vc->column);
    return vecsql::metrics::acc_vec(pq, gold_cols, pred_keywords, gold_keywords,
                                    *vecsql::default_embedder());
  });

  m.def("embed", [](const std::string& text) {
    return vecsql::default_embedder()->embed(text).components();
  });
  m.def("embedder_id", [] { return vecsql::default_embedder()->id(); });
  m.def("canonical_template", [](const std::string& sql) {
    return vecsql::sql::canonical_template(vecsql::sql::parse(sql));
  });

  m.attr("__version__") = "0.1.0";
}
