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
#include <stdexcept>
#include <string>
#include <vector>

#include "vecsql/ast.hpp"
#include "vecsql/schema.hpp"

namespace vecsql::sql {

/// Target SQL dialects. One-directional: backend texts are emitted, never
/// parsed back.
enum class Dialect { Canonical, SqliteVec, Pgvector, ClickHouse };

std::string to_string(Dialect d);
std::optional<Dialect> dialect_from_string(const std::string& s);

/// Raised when an EMBED text has no vector in the mapping or a construct has
/// no rendering in the target dialect (fail loudly, never approximate).
class TranspileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TranspilePlaceholder {
  std::string text;  // the EMBED() payload
  ColumnRef column;  // target vector column as written
};

struct TranspileOutput {
  std::string sql;
  std::vector<TranspilePlaceholder> placeholders;  // one per EMBED occurrence
};

/// Renders the query in the target dialect with every EMBED('text') resolved
/// to a literal vector through `embedded`. The optional schema supplies
/// vector-column metrics when the clause does not spell one (unknown columns
/// fall back to L2). Vector clauses render as:
///   pgvector     ORDER BY col <-> '[...]'           (<=> cosine, <#> dot)
///   ClickHouse   ORDER BY L2Distance(col, [...])    (cosineDistance; dotProduct DESC)
///   sqlite-vec   JOIN (SELECT rowid, distance FROM vec_<table>_<col>
///                      WHERE <col> MATCH '[...]' AND k = <k> ORDER BY distance) ...
TranspileOutput transpile(const VectorSqlQuery& query, Dialect dialect,
                          const std::map<std::string, Vector>& embedded,
                          const HybridSchema* schema = nullptr);

}  // namespace vecsql::sql
