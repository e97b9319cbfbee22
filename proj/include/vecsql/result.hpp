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

#include <optional>
#include <string>
#include <vector>

#include "vecsql/types.hpp"

namespace vecsql {

struct ResultRow {
  RowId id = 0;
  std::vector<Value> values;
  std::optional<double> distance;

  bool operator==(const ResultRow&) const = default;
};

/// Ordered query output with provenance. Row ids are base-table ids for
/// single-table and vector-item results, ordinals otherwise; distances are
/// present (and non-decreasing) iff the query was vector-ordered. The
/// truncation flag marks post-filter outputs that exhausted their candidate
/// budget before reaching k rows.
struct ResultSet {
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  bool truncated = false;

  std::vector<RowId> ids() const {
    std::vector<RowId> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.id);
    return out;
  }

  bool operator==(const ResultSet&) const = default;
};

}  // namespace vecsql
