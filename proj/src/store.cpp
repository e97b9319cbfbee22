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

#include "vecsql/store.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

namespace vecsql {

const StoreRow* TableData::find_row(RowId id) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), id,
                             [](const StoreRow& r, RowId v) { return r.id < v; });
  if (it == rows.end() || it->id != id) return nullptr;
  return &*it;
}

int TableData::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < def.columns.size(); ++i)
    if (def.columns[i].name == name) return static_cast<int>(i);
  return -1;
}

int TableData::vector_column_index(const std::string& name) const {
  for (std::size_t i = 0; i < def.vector_columns.size(); ++i)
    if (def.vector_columns[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

void check_scalar(const Value& v, const ColumnDef& col, const std::string& table) {
  if (is_null(v)) return;
  bool ok = false;
  switch (col.type) {
    case ScalarType::Integer: ok = std::holds_alternative<std::int64_t>(v); break;
    case ScalarType::Real:
      ok = std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v);
      break;
    case ScalarType::Text: ok = std::holds_alternative<std::string>(v); break;
    case ScalarType::Boolean: ok = std::holds_alternative<bool>(v); break;
  }
  if (!ok)
    throw std::invalid_argument(table + "." + col.name + ": value does not match declared type " +
                                to_string(col.type));
}

}  // namespace

HybridStore::HybridStore(HybridSchema schema, std::map<std::string, std::vector<StoreRow>> rows,
                         std::shared_ptr<const Embedder> embedder, ann::AnnParams params)
    : schema_(std::move(schema)), embedder_(std::move(embedder)), params_(params) {
  auto violations = schema_.check();
  if (!violations.empty())
    throw std::invalid_argument("invalid schema: " + violations.front());

  for (const auto& tdef : schema_.tables) {
    TableData data;
    data.def = tdef;

    const ColumnDef* pk = tdef.find_column(tdef.primary_key);
    if (!pk || pk->type != ScalarType::Integer)
      throw std::invalid_argument(tdef.name +
                                  ": the engine requires an integer primary key column");
    const int pk_idx = data.column_index(tdef.primary_key);

    auto it = rows.find(tdef.name);
    if (it != rows.end()) data.rows = std::move(it->second);

    std::unordered_set<RowId> seen;
    for (auto& row : data.rows) {
      if (row.scalars.size() != tdef.columns.size())
        throw std::invalid_argument(tdef.name + ": row has " +
                                    std::to_string(row.scalars.size()) + " values, expected " +
                                    std::to_string(tdef.columns.size()));
      for (std::size_t i = 0; i < row.scalars.size(); ++i)
        check_scalar(row.scalars[i], tdef.columns[i], tdef.name);
      const Value& pkv = row.scalars[pk_idx];
      if (!std::holds_alternative<std::int64_t>(pkv))
        throw std::invalid_argument(tdef.name + ": primary key value must be a non-null integer");
      row.id = std::get<std::int64_t>(pkv);
      if (!seen.insert(row.id).second)
        throw std::invalid_argument(tdef.name + ": duplicate primary key " +
                                    std::to_string(row.id));
      if (row.vectors.size() != tdef.vector_columns.size())
        throw std::invalid_argument(tdef.name + ": row has " +
                                    std::to_string(row.vectors.size()) +
                                    " vectors, expected " +
                                    std::to_string(tdef.vector_columns.size()));
      for (std::size_t i = 0; i < row.vectors.size(); ++i) {
        if (row.vectors[i].dim() != tdef.vector_columns[i].dim)
          throw std::invalid_argument(tdef.name + "." + tdef.vector_columns[i].name +
                                      ": vector dim mismatch");
      }
    }
    std::sort(data.rows.begin(), data.rows.end(),
              [](const StoreRow& a, const StoreRow& b) { return a.id < b.id; });

    for (std::size_t v = 0; v < tdef.vector_columns.size(); ++v) {
      const auto& vdef = tdef.vector_columns[v];
      ann::VectorStore exact(vdef.dim, vdef.metric);
      ann::AnnIndex index(vdef.dim, vdef.metric, params_);
      for (const auto& row : data.rows) {
        exact.add(row.id, row.vectors[v]);
        index.insert(row.id, row.vectors[v]);
      }
      data.exact.push_back(std::move(exact));
      data.indexes.push_back(std::move(index));
    }
    tables_.emplace(tdef.name, std::move(data));
  }
}

const TableData* HybridStore::table(const std::string& name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

void HybridStore::attach_index(const std::string& table, const std::string& column,
                               ann::AnnIndex index) {
  auto it = tables_.find(table);
  if (it == tables_.end()) throw std::invalid_argument("unknown table: " + table);
  const int vi = it->second.vector_column_index(column);
  if (vi < 0) throw std::invalid_argument("unknown vector column: " + table + "." + column);
  const auto& vdef = it->second.def.vector_columns[vi];
  if (index.dim() != vdef.dim || index.metric() != vdef.metric)
    throw std::invalid_argument("index snapshot does not match " + table + "." + column);
  if (index.size() != it->second.rows.size())
    throw std::invalid_argument("index id space does not match table rows");
  for (const auto& row : it->second.rows) (void)index.vector_of(row.id);  // throws if absent
  it->second.indexes[vi] = std::move(index);
}

Json HybridStore::to_json() const {
  Json tables = Json::object();
  for (const auto& [name, data] : tables_) {
    Json rows = Json::array();
    for (const auto& row : data.rows) {
      Json vals = Json::array();
      for (const auto& v : row.scalars) vals.push_back(value_to_json(v));
      Json vecs = Json::array();
      for (const auto& v : row.vectors) vecs.push_back(vector_to_json(v));
      rows.push_back({{"values", vals}, {"vectors", vecs}});
    }
    tables[name] = std::move(rows);
  }
  return Json{{"schema", schema_to_json(schema_)},
              {"embedder", embedder_ ? embedder_->id() : ""},
              {"tables", tables}};
}

HybridStore HybridStore::from_json(const Json& j, ann::AnnParams params) {
  if (!j.is_object() || !j.contains("schema") || !j.contains("tables"))
    throw JsonFormatError("store snapshot needs schema and tables");
  HybridSchema schema = schema_from_json(j["schema"]);
  std::map<std::string, std::vector<StoreRow>> rows;
  for (const auto& [name, rj] : j["tables"].items()) {
    auto& out = rows[name];
    for (const auto& row : rj) {
      StoreRow r;
      for (const auto& v : row.at("values")) r.scalars.push_back(value_from_json(v));
      if (row.contains("vectors"))
        for (const auto& v : row["vectors"]) r.vectors.push_back(vector_from_json(v));
      out.push_back(std::move(r));
    }
  }
  std::shared_ptr<const Embedder> emb;
  const std::string emb_id = j.value("embedder", std::string());
  emb = emb_id.empty() ? default_embedder() : make_embedder(emb_id);
  return HybridStore(std::move(schema), std::move(rows), std::move(emb), params);
}

void HybridStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json().dump() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

HybridStore HybridStore::load(const std::string& path, ann::AnnParams params) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open store snapshot: " + path);
  Json j;
  in >> j;
  return from_json(j, params);
}

HybridStore vectorize_schema(const HybridSchema& schema,
                             std::map<std::string, std::vector<StoreRow>> rows,
                             const std::vector<VectorizeSpec>& specs,
                             std::shared_ptr<const Embedder> embedder,
                             ann::AnnParams params) {
  if (!embedder) throw std::invalid_argument("vectorize_schema requires an embedder");
  HybridSchema hybrid = schema;

  struct Plan {
    std::string table;
    int source_idx;
    std::size_t vec_idx;
  };
  std::vector<Plan> plans;

  for (const auto& spec : specs) {
    TableDef* table = nullptr;
    for (auto& t : hybrid.tables)
      if (t.name == spec.table) table = &t;
    if (!table) throw std::invalid_argument("vectorize: unknown table " + spec.table);

    int src = -1;
    for (std::size_t i = 0; i < table->columns.size(); ++i)
      if (table->columns[i].name == spec.source_column) src = static_cast<int>(i);
    if (src < 0)
      throw std::invalid_argument("vectorize: missing source column " + spec.table + "." +
                                  spec.source_column);
    if (table->columns[src].type != ScalarType::Text)
      throw std::invalid_argument("vectorize: source column must be text: " + spec.table + "." +
                                  spec.source_column);

    VectorColumnDef vdef;
    vdef.name = spec.vector_column.empty() ? spec.source_column + "_vec" : spec.vector_column;
    vdef.dim = embedder->dim();
    vdef.metric = spec.metric;
    vdef.source_column = spec.source_column;
    vdef.embedder_id = embedder->id();
    if (table->find_vector_column(vdef.name) || table->find_column(vdef.name))
      throw std::invalid_argument("vectorize: duplicate column " + spec.table + "." + vdef.name);
    table->vector_columns.push_back(vdef);
    plans.push_back({spec.table, src, table->vector_columns.size() - 1});
  }

  for (const auto& plan : plans) {
    auto it = rows.find(plan.table);
    if (it == rows.end()) continue;
    for (auto& row : it->second) {
      std::string text;
      if (plan.source_idx < static_cast<int>(row.scalars.size())) {
        const Value& v = row.scalars[plan.source_idx];
        if (const auto* s = std::get_if<std::string>(&v)) text = *s;
      }
      if (row.vectors.size() != plan.vec_idx)
        throw std::invalid_argument("vectorize: rows already carry vectors for " + plan.table);
      row.vectors.push_back(embedder->embed(text));
    }
  }

  return HybridStore(std::move(hybrid), std::move(rows), std::move(embedder), params);
}

}  // namespace vecsql
