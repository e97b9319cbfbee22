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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/testutil.hpp"
#include "vecsql/json.hpp"
#include "vecsql/parser.hpp"
#include "vecsql/render.hpp"
#include "vecsql/validate.hpp"

using namespace vecsql;

TEST_CASE("vector components must be finite") {
  CHECK_THROWS_AS(Vector({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Vector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
  Vector v({1.0, 2.0});
  CHECK(v.dim() == 2);
}

TEST_CASE("distance metrics") {
  Vector a({0, 0}), b({3, 4});
  CHECK(l2_distance(a, b) == doctest::Approx(5.0));
  CHECK(dot_distance(b, b) == doctest::Approx(-25.0));
  Vector u({1, 0}), w({0, 1});
  CHECK(cosine_distance(u, w) == doctest::Approx(1.0));
  CHECK(cosine_distance(u, u) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cosine_distance(a, b), std::invalid_argument);  // zero vector
  CHECK_THROWS_AS(l2_distance(Vector({1}), b), std::invalid_argument);
}

TEST_CASE("schema invariant check") {
  HybridSchema s = testutil::mini_schema();
  CHECK(s.check().empty());

  SUBCASE("duplicate table name") {
    s.tables.push_back(s.tables[0]);
    CHECK_FALSE(s.check().empty());
  }
  SUBCASE("vector source must exist and be text") {
    s.tables[0].vector_columns[0].source_column = "year";
    CHECK_FALSE(s.check().empty());
    s.tables[0].vector_columns[0].source_column = "nope";
    CHECK_FALSE(s.check().empty());
  }
  SUBCASE("vector dim positive") {
    s.tables[0].vector_columns[0].dim = 0;
    CHECK_FALSE(s.check().empty());
  }
}

TEST_CASE("validate_query examples") {
  const HybridSchema schema = testutil::mini_schema();

  SUBCASE("well-formed single-table query has no diagnostics") {
    auto q = sql::parse(
        "SELECT title FROM papers WHERE year > 2020 "
        "ORDER BY DISTANCE(abstract_vec, EMBED('btree')) LIMIT 5");
    CHECK(validate_query(q, schema).empty());
  }
  SUBCASE("unknown column is reported with the offending name") {
    auto q = sql::parse("SELECT title FROM papers WHERE papers.yeer > 2020");
    auto diags = validate_query(q, schema);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "unknown-column");
    CHECK(diags[0].where == "papers.yeer");
  }
  SUBCASE("k must be at least one") {
    auto q = sql::parse(
        "SELECT title FROM papers ORDER BY DISTANCE(abstract_vec, EMBED('x')) LIMIT 0");
    auto diags = validate_query(q, schema);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "k-not-positive");
  }
}

TEST_CASE("validate_query edge cases") {
  const HybridSchema schema = testutil::mini_schema();
  auto diags_of = [&](const std::string& text) {
    return validate_query(sql::parse(text), schema);
  };

  CHECK_FALSE(diags_of("SELECT title FROM nope").empty());
  CHECK_FALSE(diags_of("SELECT title FROM papers WHERE title > 3").empty());
  CHECK_FALSE(diags_of("SELECT title FROM papers WHERE year").empty());
  CHECK_FALSE(diags_of("SELECT abstract_vec FROM papers").empty());  // vector col in scalar expr
  CHECK_FALSE(
      diags_of("SELECT title, COUNT(*) FROM papers").empty());  // mixed bare aggregate
  CHECK_FALSE(diags_of("SELECT title FROM papers INNER JOIN venues ON year > 2 WHERE TRUE")
                  .empty());  // non-equi join
  CHECK_FALSE(diags_of("SELECT name FROM papers INNER JOIN venues ON venues.id = papers.venue_id "
                       "WHERE id > 0")
                  .empty());  // ambiguous id
  CHECK(diags_of("SELECT venues.name FROM papers INNER JOIN venues ON venues.id = "
                 "papers.venue_id WHERE papers.id > 0")
            .empty());
  CHECK_FALSE(diags_of("SELECT title FROM papers WHERE id IN (SELECT id, year FROM papers)")
                  .empty());  // subquery column count
  CHECK_FALSE(
      diags_of("SELECT title FROM papers ORDER BY DISTANCE(abstract_vec, [1.0, 0.0]) LIMIT 2")
          .empty());  // literal dim mismatch
  CHECK_FALSE(diags_of("SELECT title FROM papers "
                       "ORDER BY DISTANCE(abstract_vec, EMBED('x'), 'cosine') LIMIT 2")
                  .empty());  // metric conflicts with the column's declared metric
  CHECK_FALSE(diags_of("SELECT year, COUNT(*) AS n FROM papers GROUP BY venue_id").empty());
  CHECK(diags_of("SELECT venue_id, COUNT(*) AS n FROM papers GROUP BY venue_id").empty());
  // CTE expression items need aliases; bare columns do not
  CHECK_FALSE(diags_of("WITH c AS (SELECT year + 1 FROM papers) SELECT x FROM c").empty());
  CHECK(diags_of("WITH c AS (SELECT year + 1 AS y FROM papers) SELECT y FROM c").empty());
  // recursive / forward CTE references do not resolve
  CHECK_FALSE(diags_of("WITH c AS (SELECT id FROM c) SELECT id FROM c").empty());
}

TEST_CASE("JSON round trips") {
  SUBCASE("schema") {
    const HybridSchema s = testutil::mini_schema();
    CHECK(schema_from_json(schema_to_json(s)) == s);
  }
  SUBCASE("result set with value type fidelity") {
    ResultSet rs;
    rs.columns = {"a", "b", "c", "d", "e"};
    rs.rows.push_back({7, {testutil::I(1), testutil::R(1.0), testutil::S("x"),
                           testutil::B(false), testutil::N()},
                       0.25});
    rs.truncated = true;
    const ResultSet back = result_set_from_json(result_set_to_json(rs));
    CHECK(back == rs);
    // the integer/real distinction survives
    CHECK(std::holds_alternative<std::int64_t>(back.rows[0].values[0]));
    CHECK(std::holds_alternative<double>(back.rows[0].values[1]));
  }
  SUBCASE("complexity label and sample") {
    BenchmarkSample s;
    s.id = "s0001";
    s.question = "Find things.";
    s.vectorsql = "SELECT 1 FROM papers";
    s.golden.columns = {"id"};
    s.golden.rows.push_back({1, {testutil::I(1)}, std::nullopt});
    s.label = {StructuralTier::Hard, IntegrationDepth::Join, IntentTier::Concept};
    s.keywords = {"btree index"};
    s.reference_k = 5;
    const BenchmarkSample back = sample_from_json(sample_to_json(s));
    CHECK(back.id == s.id);
    CHECK(back.label == s.label);
    CHECK(back.golden == s.golden);
    CHECK(back.keywords == s.keywords);
    CHECK(back.reference_k == s.reference_k);
  }
}

TEST_CASE("AST JSON serialization round-trips parsed queries") {
  const std::vector<std::string> corpus = {
      "SELECT 1 FROM papers",
      "SELECT title FROM papers WHERE year > 2020 AND NOT (venue_id = 3 OR year <= 2000)",
      "SELECT venue_id, COUNT(*) AS n FROM papers GROUP BY venue_id HAVING COUNT(*) >= 2 "
      "ORDER BY n DESC LIMIT 3",
      "WITH hits AS (SELECT id FROM papers ORDER BY DISTANCE(abstract_vec, EMBED('x')) LIMIT 5) "
      "SELECT title FROM papers WHERE id IN (SELECT id FROM hits)",
      "SELECT p.title, v.name FROM papers AS p LEFT JOIN venues AS v ON p.venue_id = v.id "
      "WHERE p.title LIKE 'a%' OR p.year BETWEEN 2001 AND 2003",
      "SELECT title FROM papers WHERE venue_id IN (1, 2, 3) "
      "ORDER BY DISTANCE(abstract_vec, [0.0, 1.5, -2.0, 3.25], 'l2') LIMIT 2",
  };
  for (const auto& text : corpus) {
    CAPTURE(text);
    const VectorSqlQuery q = sql::parse(text);
    const VectorSqlQuery back = query_from_json(query_to_json(q));
    CHECK(query_equal(q, back));
  }
}
