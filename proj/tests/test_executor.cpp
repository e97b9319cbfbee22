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

#include "support/oracle.hpp"
#include "support/testutil.hpp"
#include "vecsql/executor.hpp"
#include "vecsql/generator.hpp"
#include "vecsql/parser.hpp"
#include "vecsql/render.hpp"
#include "vecsql/validate.hpp"

using namespace vecsql;
using namespace vecsql::exec;
using testutil::I;
using testutil::N;
using testutil::S;

namespace {

ResultSet run(const HybridStore& store, const std::string& sql,
              const ExecStrategy& strategy = PreFilter{}) {
  return execute(store, sql::parse(sql), strategy);
}

}  // namespace

TEST_CASE("strategy spec parsing") {
  CHECK(std::holds_alternative<PreFilter>(parse_strategy("pre")));
  const auto p1 = std::get<PostFilter>(parse_strategy("post:20"));
  CHECK(p1.k_prime == 20);
  const auto p2 = std::get<PostFilter>(parse_strategy("post:x2.5"));
  CHECK(p2.multiplier == doctest::Approx(2.5));
  CHECK(std::get<PostFilter>(parse_strategy("post")).resolve_k_prime(5) == 20);  // 4k default
  const auto it = std::get<Iterative>(parse_strategy("iter:3,7"));
  CHECK(it.batch == 3);
  CHECK(it.max_scans == 7);
  CHECK_THROWS(parse_strategy("bogus"));
}

TEST_CASE("plain SQL semantics") {
  const HybridStore store = testutil::mini_store();

  SUBCASE("count over all rows") {
    const auto rs = execute_plain_sql(store, sql::parse("SELECT COUNT(*) FROM papers"));
    REQUIRE(rs.rows.size() == 1);
    CHECK(rs.rows[0].values[0] == Value{std::int64_t{4}});
  }
  SUBCASE("inner equi-join") {
    const auto rs = execute_plain_sql(
        store, sql::parse("SELECT title, name FROM papers INNER JOIN venues ON "
                          "venues.id = papers.venue_id WHERE venues.field = 'theory'"));
    REQUIRE(rs.rows.size() == 1);
    CHECK(rs.rows[0].values[0] == Value{std::string("beta")});
    CHECK(rs.rows[0].values[1] == Value{std::string("v-thy")});
  }
  SUBCASE("left join fills unmatched right side with NULLs") {
    const auto rs = execute_plain_sql(
        store,
        sql::parse("SELECT name, title FROM venues LEFT JOIN papers ON papers.venue_id = "
                   "venues.id WHERE venues.field = 'graphics'"));
    // venue 3 has no papers, so it survives with a NULL title
    REQUIRE(rs.rows.size() == 1);
    CHECK(rs.rows[0].values[0] == Value{std::string("v-iso")});
    CHECK(is_null(rs.rows[0].values[1]));
  }
  SUBCASE("divide by zero yields NULL") {
    const auto rs =
        execute_plain_sql(store, sql::parse("SELECT year / (year - year) FROM papers"));
    REQUIRE(rs.rows.size() == 4);
    for (const auto& row : rs.rows) CHECK(is_null(row.values[0]));
  }
  SUBCASE("three-valued logic keeps only definite TRUE rows") {
    const auto rs = execute_plain_sql(
        store, sql::parse("SELECT id FROM papers WHERE year / (year - year) > 0 OR id = 1"));
    REQUIRE(rs.rows.size() == 1);
    CHECK(rs.rows[0].id == 1);
  }
  SUBCASE("grouping, having, aggregates") {
    const auto rs = execute_plain_sql(
        store, sql::parse("SELECT venue_id, COUNT(*) AS n, MIN(year) AS y0 FROM papers "
                          "GROUP BY venue_id HAVING COUNT(*) >= 2 ORDER BY venue_id"));
    REQUIRE(rs.rows.size() == 1);
    CHECK(rs.rows[0].values[0] == Value{std::int64_t{1}});
    CHECK(rs.rows[0].values[1] == Value{std::int64_t{3}});
    CHECK(rs.rows[0].values[2] == Value{std::int64_t{2019}});
  }
  SUBCASE("plain default order is ascending row id") {
    const auto rs = execute_plain_sql(store, sql::parse("SELECT id FROM papers"));
    REQUIRE(rs.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(rs.rows[i].id == static_cast<RowId>(i + 1));
  }
  SUBCASE("FROM-less select evaluates over one empty row") {
    const auto rs = execute_plain_sql(store, sql::parse("SELECT 1"));
    REQUIRE(rs.rows.size() == 1);
    CHECK(rs.rows[0].values[0] == Value{std::int64_t{1}});
  }
  SUBCASE("execute_plain_sql rejects vector clauses") {
    CHECK_THROWS_AS(execute_plain_sql(store, sql::parse("SELECT id FROM papers ORDER BY "
                                                        "DISTANCE(abstract_vec, [0.0, 0.0, "
                                                        "0.0, 0.0]) LIMIT 1")),
                    ExecError);
  }
}

TEST_CASE("pre-filter picks the nearest of the filtered subset") {
  const HybridStore store = testutil::mini_store();
  // filter keeps rows {2, 3} (year >= 2021 and venue matching); nearest of
  // those to the zero vector is p3 at distance 1
  const auto rs = run(store,
                      "SELECT id, title FROM papers WHERE year > 2020 "
                      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 1");
  REQUIRE(rs.rows.size() == 1);
  CHECK(rs.rows[0].id == 3);
  CHECK(*rs.rows[0].distance == doctest::Approx(1.0));
  CHECK_FALSE(rs.truncated);
}

TEST_CASE("pre-filter returns exactly min(k, filtered size)") {
  const HybridStore store = testutil::mini_store();
  const auto rs = run(store,
                      "SELECT id FROM papers WHERE year = 2021 "
                      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 10");
  CHECK(rs.rows.size() == 2);  // only two papers in 2021
  CHECK_FALSE(rs.truncated);
}

TEST_CASE("post-filter with k' = k misses filtered-out nearest and truncates") {
  const HybridStore store = testutil::mini_store();
  // global nearest to the zero vector is p1 (2019), which fails year > 2020
  const std::string sql =
      "SELECT id FROM papers WHERE year > 2020 "
      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 1";
  PostFilter post;
  post.k_prime = 1;
  const auto rs = run(store, sql, post);
  CHECK(rs.rows.empty());
  CHECK(rs.truncated);

  // widening k' recovers the right answer
  post.k_prime = 4;
  const auto rs2 = run(store, sql, post);
  REQUIRE(rs2.rows.size() == 1);
  CHECK(rs2.rows[0].id == 3);
  CHECK_FALSE(rs2.truncated);
}

TEST_CASE("iterative widens until it matches pre-filter") {
  const HybridStore store = testutil::mini_store();
  const std::string sql =
      "SELECT id FROM papers WHERE year > 2020 "
      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 1";
  const auto pre = run(store, sql, PreFilter{});
  const auto iter = run(store, sql, Iterative{1, 3});
  REQUIRE(iter.rows.size() == pre.rows.size());
  CHECK(iter.rows[0].id == pre.rows[0].id);
}

TEST_CASE("iterative sets the truncation flag when scans run out") {
  const HybridStore store = testutil::mini_store();
  // year = 2021 matches p2 (farthest) and p4; one scan of budget 2 sees only
  // p1 and p3, neither of which qualifies
  const auto rs = run(store,
                      "SELECT id FROM papers WHERE year = 2021 "
                      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2",
                      Iterative{1, 1});
  CHECK(rs.rows.empty());
  CHECK(rs.truncated);
}

TEST_CASE("NULLs sort before non-NULL values") {
  const HybridStore store = testutil::mini_store();
  const auto rs = execute_plain_sql(
      store, sql::parse("SELECT name, title FROM venues LEFT JOIN papers ON papers.venue_id = "
                        "venues.id ORDER BY title, name"));
  REQUIRE(!rs.rows.empty());
  CHECK(is_null(rs.rows[0].values[1]));  // the paperless venue's NULL title leads
}

TEST_CASE("post-filter rows always satisfy the predicate") {
  const HybridStore store = gen::make_seed_store({.seed = 9, .papers = 300});
  const std::string sql =
      "SELECT id, year FROM papers WHERE year >= 2015 "
      "ORDER BY DISTANCE(abstract_vec, EMBED('btree index')) LIMIT 8";
  for (const char* spec : {"post:8", "post:16", "post:x4", "iter:4,4"}) {
    CAPTURE(spec);
    const auto rs = run(store, sql, parse_strategy(spec));
    for (const auto& row : rs.rows) {
      const auto year = std::get<std::int64_t>(row.values[1]);
      CHECK(year >= 2015);
    }
  }
}

TEST_CASE("post-filter recall is monotone in k-prime on the seeded fixture") {
  const HybridStore store = gen::make_seed_store({.seed = 5, .papers = 400});
  const auto query = sql::parse(
      "SELECT id FROM papers WHERE year >= 2020 "
      "ORDER BY DISTANCE(abstract_vec, EMBED('vector similarity')) LIMIT 10");
  double prev = -1.0;
  for (std::uint64_t kp : {10, 20, 40, 80, 160, 400}) {
    PostFilter post;
    post.k_prime = kp;
    const auto r = measure_recall(store, query, post);
    CHECK(r.recall >= prev - 1e-12);
    prev = r.recall;
  }
  CHECK(prev == doctest::Approx(1.0));  // k' = store size is exhaustive
}

TEST_CASE("measure_recall basics") {
  const HybridStore store = testutil::mini_store();
  const auto query = sql::parse(
      "SELECT id FROM papers WHERE year > 2020 "
      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2");

  const auto pre = measure_recall(store, query, PreFilter{});
  CHECK(pre.recall == doctest::Approx(1.0));
  CHECK(pre.precision == doctest::Approx(1.0));

  const auto iter = measure_recall(store, query, Iterative{2, 4});
  CHECK(iter.recall == doctest::Approx(1.0));

  CHECK_THROWS_AS(measure_recall(store, sql::parse("SELECT id FROM papers"), PreFilter{}),
                  ExecError);
}

TEST_CASE("vector search inside an IN subquery") {
  const HybridStore store = testutil::mini_store();
  const auto rs = run(store,
                      "SELECT id, title FROM papers WHERE id IN (SELECT id FROM papers "
                      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2)");
  REQUIRE(rs.rows.size() == 2);
  CHECK(rs.rows[0].id == 1);  // plain outer level: ascending id order
  CHECK(rs.rows[1].id == 3);
}

TEST_CASE("vector search in a CTE feeds the outer query") {
  const HybridStore store = testutil::mini_store();
  const auto rs = run(store,
                      "WITH hits AS (SELECT id FROM papers ORDER BY "
                      "DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2) "
                      "SELECT title FROM papers WHERE id IN (SELECT id FROM hits)");
  REQUIRE(rs.rows.size() == 2);
  CHECK(rs.columns == std::vector<std::string>{"title"});
}

TEST_CASE("join-integrated vector query searches the owning table") {
  const HybridStore store = testutil::mini_store();
  const auto rs = run(store,
                      "SELECT papers.id, venues.name FROM papers INNER JOIN venues ON "
                      "venues.id = papers.venue_id WHERE venues.field = 'systems' "
                      "ORDER BY DISTANCE(papers.abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2");
  REQUIRE(rs.rows.size() == 2);
  CHECK(rs.rows[0].id == 1);  // p1 d=0
  CHECK(rs.rows[1].id == 3);  // p3 d=1 (p2 is in 'theory')
  CHECK(rs.rows[0].values[1] == Value{std::string("v-sys")});
}

TEST_CASE("grouped vector level aggregates the top-k items") {
  const HybridStore store = testutil::mini_store();
  const auto rs = run(store,
                      "SELECT venue_id, COUNT(*) AS n FROM papers GROUP BY venue_id "
                      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 3");
  // top-3 items: p1 (d 0, venue 1), p3 (d 1, venue 1), p4 (d 2, venue 1)
  REQUIRE(rs.rows.size() == 1);
  CHECK(rs.rows[0].values[0] == Value{std::int64_t{1}});
  CHECK(rs.rows[0].values[1] == Value{std::int64_t{3}});
  CHECK(*rs.rows[0].distance == doctest::Approx(0.0));  // min member distance
}

TEST_CASE("distances are non-decreasing in vector-ordered results") {
  const HybridStore store = gen::make_seed_store({.seed = 2, .papers = 200});
  const auto rs = run(store,
                      "SELECT id FROM papers WHERE year >= 2005 "
                      "ORDER BY DISTANCE(abstract_vec, EMBED('cache eviction')) LIMIT 20");
  REQUIRE(!rs.rows.empty());
  for (std::size_t i = 1; i < rs.rows.size(); ++i)
    CHECK(*rs.rows[i - 1].distance <= *rs.rows[i].distance);
}

TEST_CASE("timeout budget raises TimeoutError") {
  const HybridStore store = gen::make_seed_store({.seed = 3, .papers = 500});
  const auto query = sql::parse(
      "SELECT papers.id FROM papers INNER JOIN authorship ON authorship.paper_id = papers.id "
      "INNER JOIN authors ON authors.id = authorship.author_id "
      "ORDER BY DISTANCE(abstract_vec, EMBED('x')) LIMIT 5");
  CHECK_THROWS_AS(execute(store, query, PreFilter{}, nullptr, ExecOptions{0.0}), TimeoutError);
}

TEST_CASE("resolution errors surface as ExecError when validation is skipped") {
  const HybridStore store = testutil::mini_store();
  CHECK_THROWS_AS(run(store, "SELECT nope FROM papers"), ExecError);
  CHECK_THROWS_AS(run(store, "SELECT id FROM missing_table"), ExecError);
}

TEST_CASE("adversarial differential suite against the oracle (seeded store)") {
  const HybridStore store = gen::make_seed_store({.seed = 13, .papers = 400});
  const std::vector<std::string> queries = {
      // multi-match join: papers fan out over authorship rows
      "SELECT papers.id, papers.title FROM papers INNER JOIN authorship ON "
      "authorship.paper_id = papers.id WHERE authorship.author_id <= 100 "
      "ORDER BY DISTANCE(papers.abstract_vec, EMBED('btree split')) LIMIT 12",
      // three tables, filter from the far end
      "SELECT papers.id FROM papers INNER JOIN authorship ON authorship.paper_id = papers.id "
      "INNER JOIN authors ON authors.id = authorship.author_id WHERE authors.affiliation = "
      "'uni3' ORDER BY DISTANCE(papers.abstract_vec, EMBED('cache pool')) LIMIT 8",
      // left join with predicates over the nullable side
      "SELECT venues.id, venues.name FROM venues LEFT JOIN papers ON papers.venue_id = "
      "venues.id WHERE papers.year IS NULL OR papers.year >= 2024",
      // BETWEEN, IN list, LIKE, arithmetic
      "SELECT id, year FROM papers WHERE year BETWEEN 2005 AND 2015 AND venue_id IN (1, 2, 3) "
      "ORDER BY year DESC, id LIMIT 25",
      "SELECT id FROM papers WHERE title LIKE '%index%' AND citations % 2 = 0 "
      "ORDER BY DISTANCE(abstract_vec, EMBED('latch page')) LIMIT 9",
      "SELECT id, citations * 2 + 1 AS score FROM papers WHERE (citations + year) % 7 = 0 "
      "ORDER BY score DESC, id LIMIT 10",
      // two CTEs, one vector and one scalar, combined memberships
      "WITH near AS (SELECT id FROM papers ORDER BY DISTANCE(abstract_vec, "
      "EMBED('vector neighbor recall')) LIMIT 40), recent AS (SELECT id FROM papers WHERE "
      "year >= 2018) SELECT title FROM papers WHERE id IN (SELECT id FROM near) AND id IN "
      "(SELECT id FROM recent)",
      // grouped vector level over a joined scope
      "SELECT venues.field, COUNT(*) AS n, MIN(papers.year) AS y0 FROM papers INNER JOIN "
      "venues ON venues.id = papers.venue_id WHERE venues.tier <= 3 GROUP BY venues.field "
      "ORDER BY DISTANCE(papers.abstract_vec, EMBED('storage encoding')) LIMIT 15",
      // aggregates with aliases ordered by alias
      "SELECT venue_id, AVG(citations) AS mean_c FROM papers GROUP BY venue_id "
      "HAVING COUNT(*) >= 5 ORDER BY mean_c DESC, venue_id LIMIT 6",
      // aliased self-ish naming and qualified vector column
      "SELECT p.id FROM papers AS p INNER JOIN venues AS v ON v.id = p.venue_id "
      "WHERE v.field = 'systems' AND p.year > 2001 "
      "ORDER BY DISTANCE(p.abstract_vec, EMBED('quorum log leader')) LIMIT 7",
      // vector search in an IN-subquery with an outer join
      "SELECT papers.id, venues.name FROM papers INNER JOIN venues ON venues.id = "
      "papers.venue_id WHERE papers.id IN (SELECT id FROM papers ORDER BY "
      "DISTANCE(abstract_vec, EMBED('grammar token tree')) LIMIT 30) AND venues.tier = 1",
      // NOT / OR precedence and IS NOT NULL
      "SELECT id FROM papers WHERE NOT (year < 2005 OR year > 2020) AND title IS NOT NULL "
      "ORDER BY id LIMIT 50",
  };
  for (const auto& text : queries) {
    CAPTURE(text);
    const auto q = sql::parse(text);
    REQUIRE_MESSAGE(validate_query(q, store.schema()).empty(), "should validate: " << text);
    const auto got = execute(store, q, PreFilter{});
    const auto want = oracle::evaluate(store, q);
    REQUIRE(got.rows.size() == want.rows.size());
    for (std::size_t i = 0; i < got.rows.size(); ++i) {
      CHECK(got.rows[i].id == want.rows[i].id);
      REQUIRE(got.rows[i].values.size() == want.rows[i].values.size());
      for (std::size_t v = 0; v < got.rows[i].values.size(); ++v) {
        const bool equal = (is_null(got.rows[i].values[v]) && is_null(want.rows[i].values[v])) ||
                           value_equal(got.rows[i].values[v], want.rows[i].values[v]);
        CHECK_MESSAGE(equal, "row " << i << " column " << v);
      }
    }
  }
}

TEST_CASE("pre-filter equals the brute-force oracle on the mini store") {
  const HybridStore store = testutil::mini_store();
  const std::vector<std::string> queries = {
      "SELECT id, title FROM papers WHERE year > 2019 "
      "ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2",
      "SELECT papers.id FROM papers INNER JOIN venues ON venues.id = papers.venue_id "
      "WHERE venues.field = 'systems' "
      "ORDER BY DISTANCE(abstract_vec, [1.0, 0.0, 0.0, 0.0]) LIMIT 3",
      "WITH hits AS (SELECT id FROM papers ORDER BY DISTANCE(abstract_vec, "
      "[0.0, 0.0, 0.0, 0.0]) LIMIT 3) SELECT title FROM papers WHERE id IN "
      "(SELECT id FROM hits) AND year >= 2019",
      "SELECT venue_id, COUNT(*) AS n FROM papers GROUP BY venue_id ORDER BY n DESC",
      "SELECT id FROM papers WHERE title LIKE '%a%' ORDER BY year DESC, id",
  };
  for (const auto& text : queries) {
    CAPTURE(text);
    const auto q = sql::parse(text);
    REQUIRE(validate_query(q, store.schema()).empty());
    const auto got = execute(store, q, PreFilter{});
    const auto want = oracle::evaluate(store, q);
    REQUIRE(got.rows.size() == want.rows.size());
    for (std::size_t i = 0; i < got.rows.size(); ++i) {
      CHECK(got.rows[i].id == want.rows[i].id);
      REQUIRE(got.rows[i].values.size() == want.rows[i].values.size());
      for (std::size_t v = 0; v < got.rows[i].values.size(); ++v) {
        const bool equal = (is_null(got.rows[i].values[v]) && is_null(want.rows[i].values[v])) ||
                           value_equal(got.rows[i].values[v], want.rows[i].values[v]);
        CHECK(equal);
      }
    }
  }
}
