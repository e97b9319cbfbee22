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

#include <memory>
#include <string>
#include <vector>

#include "vecsql/embedder.hpp"
#include "vecsql/store.hpp"

namespace testutil {

inline vecsql::Value I(std::int64_t v) { return vecsql::Value{v}; }
inline vecsql::Value S(std::string v) { return vecsql::Value{std::move(v)}; }
inline vecsql::Value B(bool v) { return vecsql::Value{v}; }
inline vecsql::Value R(double v) { return vecsql::Value{v}; }
inline vecsql::Value N() { return vecsql::Value{}; }

inline vecsql::HybridSchema mini_schema() {
  vecsql::HybridSchema schema;
  vecsql::TableDef papers;
  papers.name = "papers";
  papers.columns = {{"id", vecsql::ScalarType::Integer},
                    {"title", vecsql::ScalarType::Text},
                    {"abstract", vecsql::ScalarType::Text},
                    {"year", vecsql::ScalarType::Integer},
                    {"venue_id", vecsql::ScalarType::Integer}};
  papers.vector_columns = {{"abstract_vec", 4, vecsql::Metric::L2, "abstract", "hash64:4:1"}};
  papers.primary_key = "id";

  vecsql::TableDef venues;
  venues.name = "venues";
  venues.columns = {{"id", vecsql::ScalarType::Integer},
                    {"name", vecsql::ScalarType::Text},
                    {"field", vecsql::ScalarType::Text}};
  venues.primary_key = "id";

  schema.tables = {papers, venues};
  return schema;
}

// Four papers with hand-set dim-4 vectors; distances from [0,0,0,0]:
// p1 -> 0, p3 -> 1, p4 -> 2, p2 -> 5.
inline vecsql::HybridStore mini_store() {
  using vecsql::StoreRow;
  using vecsql::Vector;
  std::map<std::string, std::vector<StoreRow>> rows;
  auto paper = [](std::int64_t id, std::string title, std::int64_t year, std::int64_t venue,
                  std::vector<double> vec) {
    StoreRow r;
    r.scalars = {I(id), S(std::move(title)), S("text" + std::to_string(id)), I(year), I(venue)};
    r.vectors = {Vector{std::move(vec)}};
    return r;
  };
  rows["papers"] = {paper(1, "alpha", 2019, 1, {0, 0, 0, 0}),
                    paper(2, "beta", 2021, 2, {3, 4, 0, 0}),
                    paper(3, "gamma", 2023, 1, {1, 0, 0, 0}),
                    paper(4, "delta", 2021, 1, {0, 2, 0, 0})};
  auto venue = [](std::int64_t id, std::string name, std::string field) {
    StoreRow r;
    r.scalars = {I(id), S(std::move(name)), S(std::move(field))};
    return r;
  };
  rows["venues"] = {venue(1, "v-sys", "systems"), venue(2, "v-thy", "theory"),
                    venue(3, "v-iso", "graphics")};  // venue 3 has no papers
  return vecsql::HybridStore(mini_schema(), std::move(rows),
                             std::make_shared<vecsql::HashEmbedder>(4, 1));
}

}  // namespace testutil
