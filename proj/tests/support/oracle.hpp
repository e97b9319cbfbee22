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
//
// Brute-force reference evaluator for the test suites. Shares only the AST
// and store types with the engine: joins are nested loops, vector selection
// is a full sort of exact distances, grouping is a string-keyed map. Slow on
// purpose; it exists to disagree with the executor when the executor is
// wrong.

#pragma once

#include "vecsql/ast.hpp"
#include "vecsql/result.hpp"
#include "vecsql/store.hpp"

namespace oracle {

/// Filter-all-rows / sort / take-k evaluation (PreFilter semantics).
vecsql::ResultSet evaluate(const vecsql::HybridStore& store, const vecsql::VectorSqlQuery& query);

/// Exact top-k by linear scan over an id -> vector map; ties by ascending id.
std::vector<std::pair<vecsql::RowId, double>> knn_scan(
    const std::vector<std::pair<vecsql::RowId, vecsql::Vector>>& entries,
    const vecsql::Vector& query, vecsql::Metric metric, std::size_t k);

}  // namespace oracle
