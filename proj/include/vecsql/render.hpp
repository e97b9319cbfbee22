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

#include "vecsql/ast.hpp"

namespace vecsql::sql {

/// Deterministic single-line canonical rendering. parse(render_canonical(q))
/// yields an AST structurally identical to q.
std::string render_canonical(const VectorSqlQuery& q);
std::string render_canonical(const SelectStmt& s);

/// Canonical rendering of a standalone expression (used by diagnostics).
std::string render_expr(const Expr& e);

/// Canonical template: the query rendered with every string/number literal,
/// EMBED payload and literal vector replaced by positional placeholders
/// (?1, ?2, ...). LIMIT counts and the vector top-k are kept: they are
/// structural parameters, not literals. Idempotent: templating the parse of
/// a template yields the same string.
std::string canonical_template(const VectorSqlQuery& q);

}  // namespace vecsql::sql
