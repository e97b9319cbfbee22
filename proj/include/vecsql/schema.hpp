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

#include <cstddef>
#include <string>
#include <vector>

#include "vecsql/types.hpp"

namespace vecsql {

struct ColumnDef {
  std::string name;
  ScalarType type = ScalarType::Text;

  bool operator==(const ColumnDef&) const = default;
};

/// A vector column derived from a text source column of the same table.
struct VectorColumnDef {
  std::string name;
  std::size_t dim = 0;
  Metric metric = Metric::L2;
  std::string source_column;
  std::string embedder_id;

  bool operator==(const VectorColumnDef&) const = default;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<VectorColumnDef> vector_columns;
  std::string primary_key;

  const ColumnDef* find_column(const std::string& name) const;
  const VectorColumnDef* find_vector_column(const std::string& name) const;

  bool operator==(const TableDef&) const = default;
};

/// Relational tables plus vector columns with embedding metadata.
/// Immutable after construction; shared freely across readers.
struct HybridSchema {
  std::vector<TableDef> tables;

  const TableDef* find_table(const std::string& name) const;

  /// Structural invariant check. Returns human-readable violations:
  /// duplicate table/column names, non-positive dims, vector source
  /// columns that are missing or not text-typed, missing primary keys.
  std::vector<std::string> check() const;

  bool operator==(const HybridSchema&) const = default;
};

}  // namespace vecsql
