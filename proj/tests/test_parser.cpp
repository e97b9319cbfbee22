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

#include "vecsql/parser.hpp"
#include "vecsql/render.hpp"

using namespace vecsql;
using sql::parse;
using sql::render_canonical;

TEST_CASE("parse a vector query") {
  const auto q = parse(
      "SELECT title FROM papers "
      "ORDER BY DISTANCE(abstract_vec, EMBED('query optimization techniques')) LIMIT 5");
  REQUIRE(q.select->vector_clause.has_value());
  CHECK(q.select->vector_clause->k == 5);
  CHECK(q.select->vector_clause->embed_text() == "query optimization techniques");
  CHECK(q.select->vector_clause->column.column == "abstract_vec");
  CHECK_FALSE(q.select->limit.has_value());
  CHECK(collect_vector_clauses(q).size() == 1);
}

TEST_CASE("degenerate SQL parses with no vector clause") {
  const auto q = parse("SELECT 1");
  CHECK_FALSE(q.select->vector_clause.has_value());
  CHECK(collect_vector_clauses(q).empty());
}

TEST_CASE("truncated input reports the open parenthesis position") {
  try {
    parse("SELECT * FROM t ORDER BY DISTANCE(");
    FAIL("expected ParseError");
  } catch (const sql::ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 35);  // just past the open parenthesis
  }
}

TEST_CASE("positions track lines") {
  try {
    parse("SELECT title\nFROM papers\nWHERE year >");
    FAIL("expected ParseError");
  } catch (const sql::ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("vector ordering requires a limit") {
  CHECK_THROWS_AS(parse("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('x'))"), sql::ParseError);
}

TEST_CASE("explicit ASC on DISTANCE is accepted, DESC is not") {
  CHECK_NOTHROW(parse("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('x')) ASC LIMIT 2"));
  CHECK_THROWS_AS(parse("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('x')) DESC LIMIT 2"),
                  sql::UnsupportedConstructError);
}

TEST_CASE("comments and terminators") {
  const auto q = parse("SELECT a FROM t -- trailing comment\nWHERE a > 1;");
  CHECK(q.select->where != nullptr);
  CHECK_THROWS_AS(parse("SELECT a FROM t; SELECT b FROM u"), sql::ParseError);
}

TEST_CASE("unsupported constructs fail loudly") {
  using sql::UnsupportedConstructError;
  CHECK_THROWS_AS(parse("SELECT a FROM t UNION SELECT a FROM u"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("SELECT DISTINCT a FROM t"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("WITH RECURSIVE c AS (SELECT 1) SELECT 1 FROM c"),
                  UnsupportedConstructError);
  CHECK_THROWS_AS(parse("SELECT a FROM (SELECT a FROM t) AS d"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("SELECT COUNT(a) OVER () FROM t"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("DELETE FROM t"), UnsupportedConstructError);
}

TEST_CASE("parse-render identity on a hand corpus") {
  const std::vector<std::string> sources = {
      "SELECT 1 FROM t",
      "SELECT a, b AS bee FROM t AS x WHERE NOT (a = 1 OR b < 2) AND c LIKE '%z%'",
      "SELECT * FROM t INNER JOIN u ON t.id = u.tid LEFT JOIN w ON w.k = u.k",
      "SELECT a FROM t WHERE a BETWEEN 1 AND 3 OR a NOT BETWEEN 8 AND 9",
      "SELECT a FROM t WHERE a IN (1, 2, 3) AND b NOT IN (SELECT b FROM u)",
      "SELECT a FROM t WHERE a IS NULL OR b IS NOT NULL",
      "SELECT a + b * -c FROM t WHERE (a + b) * c >= 4 AND a % 2 = 0",
      "SELECT venue, COUNT(*) AS n, AVG(x) AS m FROM t GROUP BY venue HAVING COUNT(*) >= 2 "
      "ORDER BY n DESC, venue LIMIT 7",
      "WITH one AS (SELECT a FROM t), two AS (SELECT a FROM one) SELECT a FROM two",
      "SELECT t FROM p ORDER BY DISTANCE(v, EMBED('it''s quoted')) LIMIT 3",
      "SELECT t FROM p ORDER BY DISTANCE(p.v, [1.0, -2.5, 3.0e-05], 'cosine'), year DESC LIMIT 4",
      "SELECT a FROM t WHERE x = 2.0 AND y = 'TRUE' AND z = TRUE AND w = -1",
  };
  for (const auto& text : sources) {
    CAPTURE(text);
    const VectorSqlQuery q1 = parse(text);
    const std::string rendered = render_canonical(q1);
    const VectorSqlQuery q2 = parse(rendered);
    CHECK(query_equal(q1, q2));
    // canonical text is a fixed point
    CHECK(render_canonical(q2) == rendered);
  }
}

TEST_CASE("keyword case is normalized by rendering") {
  const auto q = parse("select a from t where a like 'x%' order by a desc limit 2");
  CHECK(render_canonical(q) ==
        "SELECT a FROM t WHERE a LIKE 'x%' ORDER BY a DESC LIMIT 2");
}

TEST_CASE("canonical templates") {
  using sql::canonical_template;
  SUBCASE("EMBED payloads do not differentiate templates") {
    const auto a = parse("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('alpha')) LIMIT 5");
    const auto b = parse("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('beta')) LIMIT 5");
    CHECK(canonical_template(a) == canonical_template(b));
  }
  SUBCASE("join structure differentiates templates") {
    const auto a = parse("SELECT t FROM p WHERE y > 2020");
    const auto b = parse("SELECT t FROM p INNER JOIN u ON p.id = u.pid WHERE y > 2020");
    CHECK(canonical_template(a) != canonical_template(b));
  }
  SUBCASE("literal values do not differentiate templates") {
    const auto a = parse("SELECT t FROM p WHERE year > 2020 AND name = 'x'");
    const auto b = parse("SELECT t FROM p WHERE year > 2022 AND name = 'y'");
    const std::string ta = canonical_template(a);
    CHECK(ta == canonical_template(b));
    CHECK(ta == "SELECT t FROM p WHERE year > ?1 AND name = ?2");
  }
  SUBCASE("templating is idempotent") {
    const std::vector<std::string> sources = {
        "SELECT t FROM p WHERE year > 2020 AND name = 'x' OR z IN (1, 2)",
        "SELECT t FROM p ORDER BY DISTANCE(v, EMBED('alpha')) LIMIT 5",
        "SELECT t FROM p ORDER BY DISTANCE(v, [1.0, 2.0]) LIMIT 5",
    };
    for (const auto& text : sources) {
      CAPTURE(text);
      const std::string t1 = canonical_template(parse(text));
      const std::string t2 = canonical_template(parse(t1));
      CHECK(t1 == t2);
    }
  }
}

TEST_CASE("tokenize exposes positions for diagnostics") {
  const auto toks = sql::tokenize("SELECT a\n FROM t");
  REQUIRE(toks.size() >= 4);
  CHECK(toks[0].kind == sql::TokenKind::Keyword);
  CHECK(toks[0].line == 1);
  CHECK(toks[0].column == 1);
  CHECK(toks[2].text == "FROM");
  CHECK(toks[2].line == 2);
  CHECK(toks[2].column == 2);
}
