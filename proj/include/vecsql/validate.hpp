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

#include <string>
#include <vector>

#include "vecsql/ast.hpp"
#include "vecsql/schema.hpp"

namespace vecsql {

/// One validation finding. `where` names the offending construct (a rendered
/// expression or clause description) so callers can point at the AST node.
struct Diagnostic {
  std::string code;
  std::string message;
  std::string where;
};

/// Checks a query against a schema: name resolution, type compatibility,
/// equi-join shape, grouping rules and vector-clause constraints. Empty
/// result means the query holds every VectorSqlQuery invariant and will
/// execute under any strategy without resolution errors.
std::vector<Diagnostic> validate_query(const VectorSqlQuery& query, const HybridSchema& schema);

inline bool is_valid(const VectorSqlQuery& query, const HybridSchema& schema) {
  return validate_query(query, schema).empty();
}

}  // namespace vecsql
