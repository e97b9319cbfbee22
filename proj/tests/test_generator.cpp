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

#include <set>

#include "support/testutil.hpp"
#include "vecsql/executor.hpp"
#include "vecsql/generator.hpp"
#include "vecsql/parser.hpp"
#include "vecsql/metrics.hpp"
#include "vecsql/render.hpp"
#include "vecsql/validate.hpp"

using namespace vecsql;
using namespace vecsql::gen;

namespace {
std::vector<VectorSqlQuery> make_variants(std::initializer_list<const VectorSqlQuery*> qs) {
  std::vector<VectorSqlQuery> out;
  for (const auto* q : qs) out.push_back(q->clone());
  return out;
}
}  // namespace

TEST_CASE("default embedder invariants") {
  const auto e = default_embedder();
  CHECK(e->id() == "hash64:64:1");
  CHECK(e->dim() == 64);

  SUBCASE("unit norm for assorted texts") {
    for (const char* text : {"btree", "a b c d", "Mixed CASE text!", "1 2 3", "x"}) {
      const Vector v = e->embed(text);
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("determinism") {
    CHECK(e->embed("query optimization") == e->embed("query optimization"));
    // tokenization is case- and punctuation-insensitive
    CHECK(e->embed("Query, Optimization?") == e->embed("query optimization"));
  }
  SUBCASE("empty and whitespace-only text embed to the documented e0 vector") {
    const Vector v = e->embed("");
    CHECK(v[0] == 1.0);
    for (std::size_t i = 1; i < v.dim(); ++i) CHECK(v[i] == 0.0);
    CHECK(e->embed("  \t ") == v);
    CHECK(e->embed("...!!!") == v);
  }
  SUBCASE("registry round trip") {
    const auto again = make_embedder(e->id());
    CHECK(again->embed("btree index") == e->embed("btree index"));
    CHECK_THROWS_AS(make_embedder("bert:large"), std::invalid_argument);
  }
  SUBCASE("pinned components guard cross-process determinism") {
    // three distinct tokens, one bucket each, all negative sign, 1/sqrt(3)
    const Vector v = e->embed("btree index structures");
    CHECK(v[12] == doctest::Approx(-0.57735026918962584).epsilon(1e-15));
    CHECK(v[26] == doctest::Approx(-0.57735026918962584).epsilon(1e-15));
    CHECK(v[50] == doctest::Approx(-0.57735026918962584).epsilon(1e-15));
    double nonzero = 0;
    for (std::size_t i = 0; i < v.dim(); ++i)
      if (v[i] != 0.0) ++nonzero;
    CHECK(nonzero == 3);
  }
}

TEST_CASE("vectorize_schema embeds configured source columns") {
  HybridSchema schema = testutil::mini_schema();
  schema.tables[0].vector_columns.clear();  // start scalar-only

  std::map<std::string, std::vector<StoreRow>> rows;
  auto row = [](std::int64_t id, const char* title, const char* abstract) {
    StoreRow r;
    r.scalars = {testutil::I(id), testutil::S(title), testutil::S(abstract),
                 testutil::I(2020), testutil::I(1)};
    return r;
  };
  rows["papers"] = {row(1, "a", "btree split"), row(2, "b", "btree split"), row(3, "c", "")};
  rows["venues"] = {};
  StoreRow v;
  v.scalars = {testutil::I(1), testutil::S("v"), testutil::S("systems")};
  rows["venues"].push_back(std::move(v));

  const auto embedder = default_embedder();
  const HybridStore store = vectorize_schema(
      schema, std::move(rows), {{"papers", "abstract", "abstract_vec", Metric::L2}}, embedder);

  const TableData* papers = store.table("papers");
  REQUIRE(papers != nullptr);
  REQUIRE(papers->def.vector_columns.size() == 1);
  CHECK(papers->def.vector_columns[0].dim == embedder->dim());
  CHECK(papers->def.vector_columns[0].embedder_id == embedder->id());
  REQUIRE(papers->rows.size() == 3);
  // identical source text embeds identically; empty text embeds to e0
  CHECK(papers->rows[0].vectors[0] == papers->rows[1].vectors[0]);
  CHECK(papers->rows[2].vectors[0][0] == 1.0);

  SUBCASE("missing source column errors") {
    HybridSchema s2 = testutil::mini_schema();
    s2.tables[0].vector_columns.clear();
    CHECK_THROWS_AS(vectorize_schema(s2, {}, {{"papers", "nope", "", Metric::L2}}, embedder),
                    std::invalid_argument);
  }
}

TEST_CASE("classify integration and structural rubric") {
  auto cls = [](const std::string& text) { return classify(sql::parse(text)); };

  SUBCASE("integration follows the vector clause position") {
    CHECK(cls("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('x')) LIMIT 5").integration ==
          IntegrationDepth::Non);  // bare vector search integrates with nothing
    CHECK(cls("SELECT t FROM p WHERE y > 2 ORDER BY DISTANCE(v, EMBED('x')) LIMIT 5")
              .integration == IntegrationDepth::Where);
    CHECK(cls("SELECT t FROM p INNER JOIN u ON u.id = p.uid WHERE u.f = 'x' "
              "ORDER BY DISTANCE(v, EMBED('x')) LIMIT 5")
              .integration == IntegrationDepth::Join);
    CHECK(cls("WITH h AS (SELECT id FROM p ORDER BY DISTANCE(v, EMBED('x')) LIMIT 5) "
              "SELECT t FROM p WHERE id IN (SELECT id FROM h)")
              .integration == IntegrationDepth::Non);
    CHECK(cls("SELECT t FROM p WHERE id IN (SELECT id FROM p ORDER BY "
              "DISTANCE(v, EMBED('x')) LIMIT 5)")
              .integration == IntegrationDepth::Non);  // subquery position
  }
  SUBCASE("plain SQL is flagged, not failed") {
    const auto r = cls("SELECT t FROM p WHERE y > 2");
    CHECK(r.plain_sql);
    CHECK(r.integration == IntegrationDepth::Non);
  }
  SUBCASE("structural tiers by documented score") {
    // joins + 2*aggregation + having + ctes; E<=1, M=2, H=3, EH>=4
    CHECK(cls("SELECT t FROM p ORDER BY DISTANCE(v, EMBED('x')) LIMIT 5").structural ==
          StructuralTier::Easy);
    CHECK(cls("SELECT t FROM p INNER JOIN u ON u.id = p.uid "
              "ORDER BY DISTANCE(v, EMBED('x')) LIMIT 5")
              .structural == StructuralTier::Easy);
    CHECK(cls("SELECT f, COUNT(*) AS n FROM p GROUP BY f").structural ==
          StructuralTier::Medium);
    CHECK(cls("SELECT t FROM p INNER JOIN u ON u.id = p.uid INNER JOIN w ON w.id = u.wid")
              .structural == StructuralTier::Medium);
    CHECK(cls("WITH c AS (SELECT id FROM p) SELECT f, COUNT(*) AS n FROM p "
              "WHERE id IN (SELECT id FROM c) GROUP BY f")
              .structural == StructuralTier::Hard);
    // the spec's worked example: three tables joined plus grouping
    CHECK(cls("SELECT u.f, COUNT(*) AS n FROM p INNER JOIN u ON u.id = p.uid "
              "INNER JOIN w ON w.id = u.wid GROUP BY u.f "
              "ORDER BY DISTANCE(p.v, EMBED('x')) LIMIT 9")
              .structural == StructuralTier::ExtraHard);
  }
}

TEST_CASE("synthesize_query covers every cell and round-trips classification") {
  const HybridStore store = make_seed_store({.seed = 21, .papers = 300});
  for (int st = 0; st < 4; ++st) {
    for (int in = 0; in < 3; ++in) {
      ComplexityTarget target;
      target.structural = static_cast<StructuralTier>(st);
      target.integration = static_cast<IntegrationDepth>(in);
      target.intent = IntentTier::Concept;
      CAPTURE(st);
      CAPTURE(in);
      const auto result = synthesize_query_full(store, target, 1000 + st * 10 + in);
      CHECK(validate_query(result.query, store.schema()).empty());
      const auto cls = classify(result.query);
      CHECK(cls.structural == target.structural);
      CHECK(cls.integration == target.integration);
      const auto rs = exec::execute(store, result.query, exec::PreFilter{});
      CHECK_FALSE(rs.rows.empty());
      // canonical text round-trips through the parser, the AST through JSON
      const std::string text = sql::render_canonical(result.query);
      CHECK(query_equal(sql::parse(text), result.query));
      CHECK(query_equal(query_from_json(query_to_json(result.query)), result.query));

      // a validated query executes under every strategy without resolution
      // errors, yields unique row ids and non-decreasing distances
      for (const char* spec : {"post:x2", "iter:5,4"}) {
        const auto alt =
            exec::execute(store, result.query, exec::parse_strategy(spec));
        std::set<RowId> ids;
        for (const auto& row : alt.rows) CHECK(ids.insert(row.id).second);
        for (std::size_t r = 1; r < alt.rows.size(); ++r) {
          if (alt.rows[r - 1].distance && alt.rows[r].distance)
            CHECK(*alt.rows[r - 1].distance <= *alt.rows[r].distance);
        }
      }
    }
  }
}

TEST_CASE("synthesize_query is deterministic in (store, target, seed)") {
  const HybridStore store = make_seed_store({.seed = 21, .papers = 300});
  ComplexityTarget target;
  target.structural = StructuralTier::Medium;
  target.integration = IntegrationDepth::Join;
  const auto a = synthesize_query(store, target, 777);
  const auto b = synthesize_query(store, target, 777);
  CHECK(sql::render_canonical(a) == sql::render_canonical(b));
  const auto c = synthesize_query(store, target, 778);
  CHECK(sql::render_canonical(a) != sql::render_canonical(c));
}

TEST_CASE("unsatisfiable targets error out") {
  // a store whose only table has no joinable neighbor cannot host Join
  HybridSchema schema;
  TableDef t;
  t.name = "docs";
  t.columns = {{"id", ScalarType::Integer}, {"body", ScalarType::Text}};
  t.primary_key = "id";
  schema.tables = {t};
  std::map<std::string, std::vector<StoreRow>> rows;
  for (int i = 1; i <= 5; ++i) {
    StoreRow r;
    r.scalars = {testutil::I(i), testutil::S("text " + std::to_string(i))};
    rows["docs"].push_back(std::move(r));
  }
  const HybridStore store =
      vectorize_schema(schema, std::move(rows), {{"docs", "body", "body_vec", Metric::L2}},
                       default_embedder());
  ComplexityTarget target;
  target.integration = IntegrationDepth::Join;
  CHECK_THROWS_AS(synthesize_query(store, target, 1), UnsatisfiableTargetError);
}

TEST_CASE("stratified sampling") {
  std::vector<ComplexityLabel> pool;
  auto label = [](StructuralTier s, IntegrationDepth i) {
    return ComplexityLabel{s, i, IntentTier::Entity};
  };
  for (int i = 0; i < 5; ++i) pool.push_back(label(StructuralTier::Easy, IntegrationDepth::Non));
  pool.push_back(label(StructuralTier::Hard, IntegrationDepth::Join));

  SUBCASE("quota is honored when supply suffices") {
    const auto sel = stratified_sample(pool, 2, 1);
    std::size_t easy_non = 0, hard_join = 0;
    for (std::size_t idx : sel.selected) {
      if (pool[idx].structural == StructuralTier::Easy) ++easy_non;
      else ++hard_join;
    }
    CHECK(easy_non == 2);
    CHECK(hard_join == 1);  // under-filled cell: everything it has
    REQUIRE(sel.shortfalls.size() == 1);
    CHECK(sel.shortfalls[0].second == 1);
  }
  SUBCASE("same seed twice selects identically") {
    CHECK(stratified_sample(pool, 2, 9).selected == stratified_sample(pool, 2, 9).selected);
  }
}

namespace {
// test-only embedder with a fixed dictionary (dim 1 keeps geometry obvious)
class FakeEmbedder final : public Embedder {
 public:
  const std::string& id() const override {
    static const std::string i = "fake:1";
    return i;
  }
  std::size_t dim() const override { return 1; }
  Vector embed(const std::string& text) const override {
    if (text == "low") return Vector{{-1.0}};
    if (text == "mid") return Vector{{0.0}};
    return Vector{{1.0}};
  }
};
}  // namespace

TEST_CASE("centroid_select") {
  const auto e = default_embedder();
  SUBCASE("single candidate is itself") {
    CHECK(centroid_select({"only choice"}, *e) == "only choice");
  }
  SUBCASE("collinear embeddings pick the middle") {
    FakeEmbedder fake;
    CHECK(centroid_select({"low", "mid", "high"}, fake) == "mid");
  }
  SUBCASE("deterministic pinned pick over five texts") {
    const std::vector<std::string> texts = {
        "find papers about btree indexes",  "btree index papers please",
        "papers on btree index structures", "btree index lookup papers",
        "some btree things",
    };
    const std::string first = centroid_select(texts, *e);
    CHECK(centroid_select(texts, *e) == first);
    // exhaustive check: no candidate is strictly closer to the mean
    std::vector<Vector> embs;
    for (const auto& t : texts) embs.push_back(e->embed(t));
    std::vector<double> mean(e->dim(), 0.0);
    for (const auto& v : embs)
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
    for (double& m : mean) m /= static_cast<double>(embs.size());
    double best = 1e9;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < embs.size(); ++i) {
      double d = 0;
      for (std::size_t c = 0; c < mean.size(); ++c)
        d += (embs[i][c] - mean[c]) * (embs[i][c] - mean[c]);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    CHECK(first == texts[best_i]);
  }
}

TEST_CASE("majority_vote") {
  auto rs = [](std::vector<RowId> ids) {
    ResultSet r;
    r.columns = {"id"};
    for (RowId id : ids) r.rows.push_back({id, {Value{id}}, std::nullopt});
    return r;
  };
  SUBCASE("identical candidates pick the first") {
    std::vector<std::optional<ResultSet>> ex{rs({1, 2}), rs({1, 2}), rs({1, 2})};
    CHECK(majority_vote(ex) == 0);
  }
  SUBCASE("two agreeing beat one outlier") {
    std::vector<std::optional<ResultSet>> ex{rs({9, 8}), rs({1, 2}), rs({1, 2})};
    CHECK(majority_vote(ex) == 1);
  }
  SUBCASE("failed executions are skipped; all-failed throws") {
    std::vector<std::optional<ResultSet>> ex{std::nullopt, rs({1})};
    CHECK(majority_vote(ex) == 1);
    std::vector<std::optional<ResultSet>> none{std::nullopt, std::nullopt};
    CHECK_THROWS(majority_vote(none));
  }
  SUBCASE("plurality fallback when no strict majority exists") {
    std::vector<std::optional<ResultSet>> ex{rs({1}), rs({2}), rs({3}), rs({1})};
    CHECK(majority_vote(ex) == 0);  // id 1 occurs twice of four: plurality
  }
  SUBCASE("five candidates, pinned by exhaustive intersection counting") {
    // id 2 appears in 3 of 5 results (strict majority); the first candidate
    // intersecting {2} wins
    std::vector<std::optional<ResultSet>> ex{rs({1, 2}), rs({2, 3}), rs({2, 4}), rs({9}),
                                             rs({5})};
    CHECK(majority_vote(ex) == 0);
    // replacing the first with a non-member shifts the win to the next
    ex[0] = rs({7});
    CHECK(majority_vote(ex) == 1);
  }
}

TEST_CASE("build_golden fuses pre-filter rankings") {
  const HybridStore store = testutil::mini_store();
  const auto v1 = sql::parse(
      "SELECT id, title FROM papers ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) "
      "LIMIT 3");

  SUBCASE("single variant keeps its order") {
    const auto golden = build_golden(store, make_variants({&v1}), 3);
    REQUIRE(golden.rows.size() == 3);
    CHECK(golden.rows[0].id == 1);
    CHECK(golden.rows[1].id == 3);
    CHECK(golden.rows[2].id == 4);
  }
  SUBCASE("two disagreeing variants fuse by RRF") {
    const auto v2 = sql::parse(
        "SELECT id, title FROM papers ORDER BY DISTANCE(abstract_vec, [3.0, 4.0, 0.0, 0.0]) "
        "LIMIT 3");
    const auto golden = build_golden(store, make_variants({&v1, &v2}), 3);
    // v1 ranking: 1,3,4 ; v2 ranking: 2,4,3 — RRF puts the shared mid-ranks first
    const auto fused = metrics::rrf_fuse({{1, 3, 4}, {2, 4, 3}});
    REQUIRE(golden.rows.size() == fused.size());
    for (std::size_t i = 0; i < fused.size(); ++i) CHECK(golden.rows[i].id == fused[i]);
  }
  SUBCASE("column mismatch errors") {
    const auto v3 = sql::parse(
        "SELECT id FROM papers ORDER BY DISTANCE(abstract_vec, [0.0, 0.0, 0.0, 0.0]) LIMIT 2");
    CHECK_THROWS(build_golden(store, make_variants({&v1, &v3}), 2));
  }
}

TEST_CASE("generate_workload produces valid, scoreable samples") {
  const HybridStore store = make_seed_store({.seed = 33, .papers = 300});
  WorkloadConfig cfg;
  cfg.seed = 33;
  cfg.quota_per_cell = 1;
  cfg.oversample = 1;
  cfg.variants = 3;
  const auto samples = generate_workload(store, cfg);
  CHECK(samples.size() >= 10);  // 12 cells, occasional shortfall tolerated

  std::set<std::pair<int, int>> cells;
  for (const auto& s : samples) {
    CAPTURE(s.id);
    const auto q = sql::parse(s.vectorsql);
    CHECK(validate_query(q, store.schema()).empty());
    CHECK_FALSE(s.golden.rows.empty());
    CHECK_FALSE(s.question.empty());
    CHECK_FALSE(s.keywords.empty());
    CHECK(s.reference_k >= 1);
    const auto cls = classify(q);
    CHECK(cls.structural == s.label.structural);
    CHECK(cls.integration == s.label.integration);
    cells.insert({static_cast<int>(s.label.structural),
                  static_cast<int>(s.label.integration)});
  }
  CHECK(cells.size() == 12);

  SUBCASE("workload generation is deterministic") {
    const auto again = generate_workload(store, cfg);
    REQUIRE(again.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      CHECK(again[i].vectorsql == samples[i].vectorsql);
      CHECK(again[i].question == samples[i].question);
      CHECK(again[i].golden.ids() == samples[i].golden.ids());
    }
  }
}
