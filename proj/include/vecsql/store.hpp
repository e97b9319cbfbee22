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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vecsql/ann.hpp"
#include "vecsql/embedder.hpp"
#include "vecsql/json.hpp"
#include "vecsql/schema.hpp"

namespace vecsql {

/// One stored row: scalar values in table column order, vector values in
/// vector-column order. The row id is the primary-key value.
struct StoreRow {
  RowId id = 0;
  std::vector<Value> scalars;
  std::vector<Vector> vectors;
};

struct TableData {
  TableDef def;
  std::vector<StoreRow> rows;  // ascending row id
  // parallel to def.vector_columns
  std::vector<ann::VectorStore> exact;
  std::vector<ann::AnnIndex> indexes;

  const StoreRow* find_row(RowId id) const;
  int column_index(const std::string& name) const;        // -1 when absent
  int vector_column_index(const std::string& name) const; // -1 when absent
};

/// In-memory hybrid database: schema, rows, and per-vector-column exact
/// stores plus approximate indexes. Immutable once built; queries share it
/// freely across threads.
class HybridStore {
 public:
  /// Builds from fully-populated rows (vectors included). The primary key
  /// must be an integer column; its value is the row id.
  HybridStore(HybridSchema schema, std::map<std::string, std::vector<StoreRow>> rows,
              std::shared_ptr<const Embedder> embedder, ann::AnnParams params = {});

  const HybridSchema& schema() const { return schema_; }
  const std::shared_ptr<const Embedder>& embedder() const { return embedder_; }
  const TableData* table(const std::string& name) const;
  const ann::AnnParams& ann_params() const { return params_; }

  Json to_json() const;
  static HybridStore from_json(const Json& j, ann::AnnParams params = {});
  void save(const std::string& path) const;
  static HybridStore load(const std::string& path, ann::AnnParams params = {});

  /// Replaces the approximate index of table.column with a prebuilt snapshot
  /// (dimension/metric/id-space checked).
  void attach_index(const std::string& table, const std::string& column, ann::AnnIndex index);

 private:
  HybridSchema schema_;
  std::map<std::string, TableData> tables_;
  std::shared_ptr<const Embedder> embedder_;
  ann::AnnParams params_;
};

/// Configuration for schema vectorization: which text column of which table
/// becomes which vector column, under which metric.
struct VectorizeSpec {
  std::string table;
  std::string source_column;
  std::string vector_column;  // defaults to "<source>_vec" when empty
  Metric metric = Metric::L2;
};

/// Adds one vector column per spec to a scalar-only schema and embeds every
/// row's source text (NULL embeds like the empty string; rows are retained).
/// Errors: unknown table/source column, duplicate vector column name.
HybridStore vectorize_schema(const HybridSchema& schema,
                             std::map<std::string, std::vector<StoreRow>> rows,
                             const std::vector<VectorizeSpec>& specs,
                             std::shared_ptr<const Embedder> embedder,
                             ann::AnnParams params = {});

}  // namespace vecsql
