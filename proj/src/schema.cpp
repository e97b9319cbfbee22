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

#include "vecsql/schema.hpp"

#include <unordered_set>

namespace vecsql {

const ColumnDef* TableDef::find_column(const std::string& n) const {
  for (const auto& c : columns)
    if (c.name == n) return &c;
  return nullptr;
}

const VectorColumnDef* TableDef::find_vector_column(const std::string& n) const {
  for (const auto& c : vector_columns)
    if (c.name == n) return &c;
  return nullptr;
}

const TableDef* HybridSchema::find_table(const std::string& n) const {
  for (const auto& t : tables)
    if (t.name == n) return &t;
  return nullptr;
}

std::vector<std::string> HybridSchema::check() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> table_names;
  for (const auto& t : tables) {
    if (!table_names.insert(t.name).second)
      out.push_back("duplicate table name: " + t.name);
    std::unordered_set<std::string> cols;
    for (const auto& c : t.columns) {
      if (!cols.insert(c.name).second)
        out.push_back(t.name + ": duplicate column name: " + c.name);
    }
    for (const auto& v : t.vector_columns) {
      if (!cols.insert(v.name).second)
        out.push_back(t.name + ": duplicate column name: " + v.name);
      if (v.dim == 0) out.push_back(t.name + "." + v.name + ": vector dim must be positive");
      const ColumnDef* src = t.find_column(v.source_column);
      if (!src)
        out.push_back(t.name + "." + v.name + ": source column not found: " + v.source_column);
      else if (src->type != ScalarType::Text)
        out.push_back(t.name + "." + v.name + ": source column must be text-typed");
    }
    if (t.primary_key.empty())
      out.push_back(t.name + ": missing primary key column");
    else if (!t.find_column(t.primary_key))
      out.push_back(t.name + ": primary key column not found: " + t.primary_key);
  }
  return out;
}

}  // namespace vecsql
