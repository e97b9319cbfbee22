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

#include "vecsql/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vecsql/executor.hpp"
#include "vecsql/metrics.hpp"
#include "vecsql/render.hpp"
#include "vecsql/validate.hpp"

namespace vecsql::gen {

// splitmix64
std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::size_t Rng::uniform(std::size_t n) { return n == 0 ? 0 : next() % n; }

double Rng::unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }

const RubricWeights& rubric() {
  static const RubricWeights w{};
  return w;
}

namespace {

bool has_aggregate(const Expr& e) {
  bool found = false;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Aggregate>) found = true;
        else if constexpr (std::is_same_v<T, Expr::Unary>) found = has_aggregate(*n.operand);
        else if constexpr (std::is_same_v<T, Expr::Binary>)
          found = has_aggregate(*n.lhs) || has_aggregate(*n.rhs);
        else if constexpr (std::is_same_v<T, Expr::Between>)
          found = has_aggregate(*n.subject) || has_aggregate(*n.low) || has_aggregate(*n.high);
        else if constexpr (std::is_same_v<T, Expr::InList>) {
          found = has_aggregate(*n.subject);
          for (const auto& it : n.items) found = found || has_aggregate(*it);
        } else if constexpr (std::is_same_v<T, Expr::InSubquery>)
          found = has_aggregate(*n.subject);
        else if constexpr (std::is_same_v<T, Expr::Like>)
          found = has_aggregate(*n.subject) || has_aggregate(*n.pattern);
        else if constexpr (std::is_same_v<T, Expr::IsNull>)
          found = has_aggregate(*n.subject);
      },
      e.node);
  return found;
}

struct StructuralCounts {
  int joins = 0;
  bool aggregation = false;
  bool having = false;
  int ctes = 0;
};

void count_level(const SelectStmt& s, StructuralCounts& c) {
  c.joins += static_cast<int>(s.joins.size());
  if (!s.group_by.empty()) c.aggregation = true;
  if (s.having) c.having = true;
  for (const auto& it : s.items) c.aggregation = c.aggregation || has_aggregate(*it.expr);
  for (const auto& o : s.order_by) c.aggregation = c.aggregation || has_aggregate(*o.expr);
  if (s.having) c.aggregation = true;
}

}  // namespace

ClassifyResult classify(const VectorSqlQuery& query) {
  ClassifyResult r;

  StructuralCounts counts;
  counts.ctes = static_cast<int>(query.ctes.size());
  for_each_level(query, [&](const SelectStmt& s) { count_level(s, counts); });

  const RubricWeights& w = rubric();
  const int score = w.join * counts.joins + (counts.aggregation ? w.aggregation : 0) +
                    (counts.having ? w.having : 0) + w.cte * counts.ctes;
  r.structural = score <= w.easy_max     ? StructuralTier::Easy
                 : score <= w.medium_max ? StructuralTier::Medium
                 : score <= w.hard_max   ? StructuralTier::Hard
                                         : StructuralTier::ExtraHard;

  // integration: deepest coupling over all vector clauses; clauses inside
  // CTEs or subqueries are Non by position
  bool any_clause = false;
  IntegrationDepth depth = IntegrationDepth::Non;
  auto bump = [&](IntegrationDepth d) {
    if (static_cast<int>(d) > static_cast<int>(depth)) depth = d;
  };
  for (const auto& cte : query.ctes) {
    for_each_level(*cte.select, [&](const SelectStmt& s) {
      if (s.vector_clause) any_clause = true;  // Non by position
    });
  }
  bool outer = true;
  for_each_level(*query.select, [&](const SelectStmt& s) {
    const bool top = outer;
    outer = false;  // only the first visited level is the outer statement
    if (!s.vector_clause) return;
    any_clause = true;
    if (!top) return;  // subquery position: Non
    if (!s.joins.empty())
      bump(IntegrationDepth::Join);
    else if (s.where)
      bump(IntegrationDepth::Where);
  });
  r.integration = depth;
  r.plain_sql = !any_clause;
  return r;
}

// ---- selection operators ----------------------------------------------------

StratifiedSelection stratified_sample(const std::vector<ComplexityLabel>& pool_labels,
                                      std::size_t quota_per_cell, std::uint64_t seed) {
  StratifiedSelection out;
  std::map<std::pair<int, int>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < pool_labels.size(); ++i) {
    cells[{static_cast<int>(pool_labels[i].structural),
           static_cast<int>(pool_labels[i].integration)}]
        .push_back(i);
  }
  for (auto& [key, members] : cells) {
    Rng rng(seed ^ (static_cast<std::uint64_t>(key.first) * 131 +
                    static_cast<std::uint64_t>(key.second) * 17));
    rng.shuffle(members);
    const std::size_t take = std::min(quota_per_cell, members.size());
    for (std::size_t i = 0; i < take; ++i) out.selected.push_back(members[i]);
    if (members.size() < quota_per_cell) {
      ComplexityLabel cell;
      cell.structural = static_cast<StructuralTier>(key.first);
      cell.integration = static_cast<IntegrationDepth>(key.second);
      out.shortfalls.emplace_back(cell, quota_per_cell - members.size());
    }
  }
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

std::string centroid_select(const std::vector<std::string>& candidates,
                            const Embedder& embedder) {
  if (candidates.empty()) throw std::invalid_argument("centroid_select needs >= 1 candidate");
  std::vector<Vector> embs;
  embs.reserve(candidates.size());
  for (const auto& c : candidates) embs.push_back(embedder.embed(c));
  std::vector<double> mean(embedder.dim(), 0.0);
  for (const auto& e : embs)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += e[i];
  for (double& m : mean) m /= static_cast<double>(embs.size());
  const Vector centroid{std::vector<double>(mean)};
  std::size_t best = 0;
  double best_d = l2_distance(embs[0], centroid);
  for (std::size_t i = 1; i < embs.size(); ++i) {
    const double d = l2_distance(embs[i], centroid);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return candidates[best];
}

std::size_t majority_vote(const std::vector<std::optional<ResultSet>>& executions) {
  std::size_t successes = 0;
  std::map<RowId, std::size_t> occurrences;
  for (const auto& r : executions) {
    if (!r) continue;
    ++successes;
    std::set<RowId> uniq;
    for (const auto& row : r->rows) uniq.insert(row.id);
    for (RowId id : uniq) ++occurrences[id];
  }
  if (successes == 0)
    throw std::runtime_error("majority_vote: every candidate execution failed");

  // strict majority; plurality fallback when no id crosses half
  std::set<RowId> majority;
  for (const auto& [id, n] : occurrences)
    if (2 * n > successes) majority.insert(id);
  if (majority.empty() && !occurrences.empty()) {
    std::size_t max_n = 0;
    for (const auto& [id, n] : occurrences) max_n = std::max(max_n, n);
    for (const auto& [id, n] : occurrences)
      if (n == max_n) majority.insert(id);
  }

  std::size_t best = 0;
  long best_overlap = -1;
  for (std::size_t i = 0; i < executions.size(); ++i) {
    if (!executions[i]) continue;
    std::set<RowId> ids;
    for (const auto& row : executions[i]->rows) ids.insert(row.id);
    long overlap = 0;
    for (RowId id : ids)
      if (majority.count(id)) ++overlap;
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = i;
    }
  }
  return best;
}

ResultSet build_golden(const HybridStore& store, const std::vector<VectorSqlQuery>& variants,
                       std::uint64_t k) {
  (void)k;  // the annotated reference top-k travels with the sample, not the fusion
  if (variants.empty()) throw std::invalid_argument("build_golden needs >= 1 variant");
  std::vector<ResultSet> results;
  for (const auto& v : variants)
    results.push_back(exec::execute(store, v, exec::PreFilter{}));
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].columns != results[0].columns)
      throw std::runtime_error("build_golden: variant column sets differ");
  }
  std::vector<std::vector<RowId>> rankings;
  for (const auto& r : results) rankings.push_back(r.ids());
  const std::vector<RowId> fused = metrics::rrf_fuse(rankings);
  if (fused.empty()) throw std::runtime_error("build_golden: fused golden set is empty");

  ResultSet golden;
  golden.columns = results[0].columns;
  for (RowId id : fused) {
    for (const auto& r : results) {
      bool found = false;
      for (const auto& row : r.rows) {
        if (row.id == id) {
          golden.rows.push_back({row.id, row.values, std::nullopt});
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }
  return golden;
}

// ---- seeded dataset ----------------------------------------------------------

namespace {

const std::vector<std::vector<std::string>>& topics() {
  static const std::vector<std::vector<std::string>> t = {
      {"btree", "index", "page", "latch", "split"},
      {"hashing", "bucket", "collision", "probe", "rehash"},
      {"transaction", "lock", "isolation", "commit", "rollback"},
      {"vector", "embedding", "similarity", "neighbor", "recall"},
      {"parser", "grammar", "token", "syntax", "tree"},
      {"join", "partition", "pipeline", "build", "stream"},
      {"storage", "compression", "segment", "column", "encoding"},
      {"query", "optimizer", "plan", "cost", "cardinality"},
      {"replication", "consensus", "quorum", "leader", "log"},
      {"cache", "buffer", "eviction", "memory", "pool"},
  };
  return t;
}

const std::vector<std::string>& fillers() {
  static const std::vector<std::string> f = {"system",  "design",   "evaluation", "performance",
                                             "analysis", "modern",  "efficient",  "scalable",
                                             "workload", "benchmark"};
  return f;
}

const std::vector<std::string>& fields() {
  static const std::vector<std::string> f = {"systems",  "theory",   "ml",  "databases",
                                             "networks", "security", "hci", "graphics"};
  return f;
}

std::string make_text(Rng& rng, std::size_t topic_idx, std::size_t topic_words,
                      std::size_t filler_words) {
  const auto& topic = topics()[topic_idx];
  std::vector<std::string> words;
  for (std::size_t i = 0; i < topic_words; ++i) words.push_back(rng.pick(topic));
  for (std::size_t i = 0; i < filler_words; ++i) words.push_back(rng.pick(fillers()));
  rng.shuffle(words);
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += " ";
    out += words[i];
  }
  return out;
}

}  // namespace

SeedDataset make_seed_dataset(const SeedDataConfig& config) {
  SeedDataset out;
  Rng rng(config.seed * 0x9E3779B97F4A7C15ull + 7);

  TableDef venues;
  venues.name = "venues";
  venues.columns = {{"id", ScalarType::Integer},
                    {"name", ScalarType::Text},
                    {"field", ScalarType::Text},
                    {"tier", ScalarType::Integer}};
  venues.primary_key = "id";

  TableDef papers;
  papers.name = "papers";
  papers.columns = {{"id", ScalarType::Integer},     {"title", ScalarType::Text},
                    {"abstract", ScalarType::Text},  {"year", ScalarType::Integer},
                    {"citations", ScalarType::Integer}, {"venue_id", ScalarType::Integer},
                    {"area", ScalarType::Text}};
  papers.primary_key = "id";

  TableDef authors;
  authors.name = "authors";
  authors.columns = {{"id", ScalarType::Integer},
                     {"name", ScalarType::Text},
                     {"affiliation", ScalarType::Text},
                     {"bio", ScalarType::Text}};
  authors.primary_key = "id";

  TableDef authorship;
  authorship.name = "authorship";
  authorship.columns = {{"id", ScalarType::Integer},
                        {"paper_id", ScalarType::Integer},
                        {"author_id", ScalarType::Integer}};
  authorship.primary_key = "id";

  out.schema.tables = {venues, papers, authors, authorship};

  auto& venue_rows = out.rows["venues"];
  for (std::size_t i = 1; i <= config.venues; ++i) {
    StoreRow r;
    r.scalars = {Value{static_cast<std::int64_t>(i)},
                 Value{"venue" + std::to_string(i) + " symposium"},
                 Value{fields()[rng.uniform(fields().size())]},
                 Value{static_cast<std::int64_t>(1 + rng.uniform(4))}};
    venue_rows.push_back(std::move(r));
  }

  auto& paper_rows = out.rows["papers"];
  for (std::size_t i = 1; i <= config.papers; ++i) {
    const std::size_t topic = rng.uniform(topics().size());
    StoreRow r;
    r.scalars = {Value{static_cast<std::int64_t>(i)},
                 Value{make_text(rng, topic, 3, 1)},
                 Value{make_text(rng, topic, 6, 6)},
                 Value{static_cast<std::int64_t>(2000 + rng.uniform(25))},
                 Value{static_cast<std::int64_t>(rng.uniform(500))},
                 Value{static_cast<std::int64_t>(1 + rng.uniform(config.venues))},
                 Value{fields()[rng.uniform(fields().size())]}};
    paper_rows.push_back(std::move(r));
  }

  auto& author_rows = out.rows["authors"];
  for (std::size_t i = 1; i <= config.authors; ++i) {
    const std::size_t topic = rng.uniform(topics().size());
    StoreRow r;
    r.scalars = {Value{static_cast<std::int64_t>(i)},
                 Value{"author" + std::to_string(i)},
                 Value{"uni" + std::to_string(rng.uniform(10))},
                 Value{make_text(rng, topic, 4, 4)}};
    author_rows.push_back(std::move(r));
  }

  auto& link_rows = out.rows["authorship"];
  for (std::size_t i = 1; i <= config.authorships; ++i) {
    StoreRow r;
    r.scalars = {Value{static_cast<std::int64_t>(i)},
                 Value{static_cast<std::int64_t>(1 + rng.uniform(config.papers))},
                 Value{static_cast<std::int64_t>(1 + rng.uniform(config.authors))}};
    link_rows.push_back(std::move(r));
  }

  out.specs = {{"papers", "abstract", "abstract_vec", Metric::L2},
               {"authors", "bio", "bio_vec", Metric::Cosine}};
  return out;
}

HybridStore make_seed_store(const SeedDataConfig& config,
                            std::shared_ptr<const Embedder> embedder, ann::AnnParams params) {
  SeedDataset ds = make_seed_dataset(config);
  if (!embedder) embedder = default_embedder();
  return vectorize_schema(ds.schema, std::move(ds.rows), ds.specs, std::move(embedder), params);
}

// ---- query synthesis ----------------------------------------------------------

namespace {

struct JoinEdge {
  std::string from_table, from_column;  // foreign key side
  std::string to_table, to_column;      // primary key side
};

std::vector<JoinEdge> join_edges(const HybridSchema& schema) {
  std::vector<JoinEdge> edges;
  for (const auto& t : schema.tables) {
    for (const auto& c : t.columns) {
      if (c.name.size() <= 3 || c.name.substr(c.name.size() - 3) != "_id") continue;
      const std::string prefix = c.name.substr(0, c.name.size() - 3);
      for (const auto& other : schema.tables) {
        if (other.name == prefix || other.name == prefix + "s" || other.name == prefix + "es")
          edges.push_back({t.name, c.name, other.name, other.primary_key});
      }
    }
  }
  return edges;
}

// columns usable in generated predicates: scalar, not the pk, not a foreign
// key, not the source text behind a vector column
std::vector<const ColumnDef*> predicate_columns(const TableDef& t) {
  std::vector<const ColumnDef*> out;
  for (const auto& c : t.columns) {
    if (c.name == t.primary_key) continue;
    if (c.name.size() > 3 && c.name.substr(c.name.size() - 3) == "_id") continue;
    bool is_source = false;
    for (const auto& v : t.vector_columns) is_source = is_source || v.source_column == c.name;
    if (is_source) continue;
    out.push_back(&c);
  }
  return out;
}

const std::vector<std::string>& paraphrase_suffixes() {
  static const std::vector<std::string> s = {"methods", "techniques", "approaches",
                                             "strategies"};
  return s;
}

std::string keyword_for(IntentTier intent, Rng& rng) {
  const std::size_t topic = rng.uniform(topics().size());
  const auto& words = topics()[topic];
  switch (intent) {
    case IntentTier::Entity:
      return rng.pick(words);
    case IntentTier::Concept: {
      std::string a = rng.pick(words), b = rng.pick(words);
      if (b == a) b = words[(rng.uniform(words.size() - 1) + 1) % words.size()];
      return a + " " + b;
    }
    case IntentTier::Reasoning: {
      std::string a = rng.pick(words), b = rng.pick(words), c = rng.pick(fillers()),
                  d = rng.pick(fillers());
      return a + " " + b + " with " + c + " " + d;
    }
  }
  return "vector";
}

struct Synth {
  const HybridStore& store;
  const ComplexityTarget& target;
  Rng rng;

  const TableDef* vtable = nullptr;
  const VectorColumnDef* vcol = nullptr;
  std::uint64_t k = 0;

  Synth(const HybridStore& s, const ComplexityTarget& t, std::uint64_t seed)
      : store(s), target(t), rng(seed) {}

  ExprPtr data_predicate(const TableDef& table, bool qualified, bool selective) {
    auto cols = predicate_columns(table);
    if (cols.empty()) throw UnsatisfiableTargetError("no predicate column on " + table.name);
    // selective predicates prefer text equality; broad ones numeric ranges
    std::vector<const ColumnDef*> texts, ints, bools;
    for (const auto* c : cols) {
      if (c->type == ScalarType::Text) texts.push_back(c);
      else if (c->type == ScalarType::Integer || c->type == ScalarType::Real) ints.push_back(c);
      else bools.push_back(c);
    }
    const TableData* data = store.table(table.name);
    if (!data || data->rows.empty())
      throw UnsatisfiableTargetError("no rows in " + table.name);
    auto sample_value = [&](const std::string& col) {
      const int ci = data->column_index(col);
      const StoreRow& row = data->rows[rng.uniform(data->rows.size())];
      return row.scalars[ci];
    };
    const std::string qual = qualified ? table.name : "";

    const ColumnDef* col = nullptr;
    if (selective && !texts.empty()) col = texts[rng.uniform(texts.size())];
    else if (!ints.empty()) col = ints[rng.uniform(ints.size())];
    else if (!texts.empty()) col = texts[rng.uniform(texts.size())];
    else col = bools[rng.uniform(bools.size())];

    Value pivot = sample_value(col->name);
    if (is_null(pivot)) pivot = col->type == ScalarType::Text ? Value{std::string("x")}
                                                              : Value{std::int64_t{0}};
    if (col->type == ScalarType::Text)
      return make_binary(BinaryOp::Eq, make_column(qual, col->name), make_literal(pivot));
    if (col->type == ScalarType::Boolean)
      return make_binary(BinaryOp::Eq, make_column(qual, col->name), make_literal(pivot));
    const BinaryOp op = rng.uniform(2) == 0 ? BinaryOp::Ge : BinaryOp::Le;
    return make_binary(op, make_column(qual, col->name), make_literal(pivot));
  }

  SelectPtr vector_cte_body(const std::string& keyword) {
    auto sel = std::make_unique<SelectStmt>();
    sel->items.push_back({make_column("", vtable->primary_key), ""});
    sel->from = {vtable->name, ""};
    VectorClause vc;
    vc.column = {"", vcol->name};
    vc.query = keyword;
    vc.k = k;
    sel->vector_clause = std::move(vc);
    return sel;
  }

  ExprPtr membership(const std::string& subject_table, const std::string& pk,
                     const std::string& cte, const std::string& cte_col) {
    auto sub = std::make_unique<SelectStmt>();
    sub->items.push_back({make_column("", cte_col), ""});
    sub->from = {cte, ""};
    auto e = std::make_unique<Expr>();
    e->node = Expr::InSubquery{make_column(subject_table, pk), std::move(sub), false};
    return e;
  }

  static void add_where(SelectStmt& s, ExprPtr pred) {
    if (!s.where) {
      s.where = std::move(pred);
    } else {
      s.where = make_binary(BinaryOp::And, std::move(s.where), std::move(pred));
    }
  }

  SynthesisResult build() {
    // vector table choice
    std::vector<const TableDef*> candidates;
    const std::vector<JoinEdge> edges = join_edges(store.schema());
    for (const auto& t : store.schema().tables) {
      if (t.vector_columns.empty()) continue;
      const TableData* data = store.table(t.name);
      if (!data || data->rows.empty()) continue;
      if (target.integration == IntegrationDepth::Join) {
        bool joinable = false;
        for (const auto& e : edges)
          joinable = joinable || e.from_table == t.name || e.to_table == t.name;
        if (!joinable) continue;
      }
      candidates.push_back(&t);
    }
    if (candidates.empty())
      throw UnsatisfiableTargetError("schema cannot host the requested integration depth");
    vtable = candidates[rng.uniform(candidates.size())];
    vcol = &vtable->vector_columns[rng.uniform(vtable->vector_columns.size())];
    static const std::uint64_t ks[] = {3, 5, 10};
    k = ks[rng.uniform(3)];

    std::vector<std::string> keywords;
    for (std::size_t i = 0; i < target.vector_ops; ++i)
      keywords.push_back(keyword_for(target.intent, rng));

    // structural budget
    const RubricWeights& w = rubric();
    int t_min = 0, t_max = 0;
    switch (target.structural) {
      case StructuralTier::Easy: t_min = 0; t_max = w.easy_max; break;
      case StructuralTier::Medium: t_min = w.easy_max + 1; t_max = w.medium_max; break;
      case StructuralTier::Hard: t_min = w.medium_max + 1; t_max = w.hard_max; break;
      case StructuralTier::ExtraHard: t_min = w.hard_max + 1; t_max = w.hard_max + 2; break;
    }

    // base cost by integration recipe
    int score = 0;
    int base_joins = 0;
    std::size_t extra_vector_ctes = target.vector_ops - 1;
    bool uses_hits_cte = target.integration == IntegrationDepth::Non;
    if (uses_hits_cte)
      score += w.cte * static_cast<int>(target.vector_ops);
    else
      score += w.cte * static_cast<int>(extra_vector_ctes);
    if (target.integration == IntegrationDepth::Join) {
      base_joins = 1;
      score += w.join;
    }
    if (score > t_max)
      throw UnsatisfiableTargetError("vector-op count exceeds the structural budget");

    // fillers to reach the band
    int extra_joins = 0;
    bool group = false, having = false, scalar_cte = false;
    const bool joins_allowed = target.integration != IntegrationDepth::Where;
    const int max_joins = 2;  // beyond the base join
    while (score < t_min) {
      const int gap = t_min - score;
      if (gap >= w.aggregation && !group) {
        group = true;
        score += w.aggregation;
      } else if (joins_allowed && extra_joins < max_joins && score + w.join <= t_max) {
        ++extra_joins;
        score += w.join;
      } else if (!scalar_cte && score + w.cte <= t_max) {
        scalar_cte = true;
        score += w.cte;
      } else if (group && !having && score + w.having <= t_max) {
        having = true;
        score += w.having;
      } else if (!group && score + w.aggregation <= t_max) {
        group = true;
        score += w.aggregation;
      } else {
        throw UnsatisfiableTargetError("cannot reach the structural band for this target");
      }
    }

    // assemble
    VectorSqlQuery q;
    std::vector<std::string> hits_names;
    if (uses_hits_cte) {
      for (std::size_t i = 0; i < target.vector_ops; ++i) {
        const std::string name = "hits" + std::to_string(i);
        q.ctes.push_back({name, vector_cte_body(keywords[i])});
        hits_names.push_back(name);
      }
    } else {
      for (std::size_t i = 0; i < extra_vector_ctes; ++i) {
        const std::string name = "hits" + std::to_string(i);
        q.ctes.push_back({name, vector_cte_body(keywords[i + 1])});
        hits_names.push_back(name);
      }
    }

    auto level = std::make_unique<SelectStmt>();
    level->from = {vtable->name, ""};

    // joins: a deterministic walk over the FK graph starting at the table
    const int want_joins = base_joins + extra_joins;
    std::vector<std::string> in_scope{vtable->name};
    std::vector<const TableDef*> joined_tables;
    for (int j = 0; j < want_joins; ++j) {
      std::vector<const JoinEdge*> usable;
      for (const auto& e : edges) {
        const bool from_in = std::count(in_scope.begin(), in_scope.end(), e.from_table) > 0;
        const bool to_in = std::count(in_scope.begin(), in_scope.end(), e.to_table) > 0;
        if (from_in == to_in) continue;  // need exactly one side in scope
        usable.push_back(&e);
      }
      if (usable.empty())
        throw UnsatisfiableTargetError("join graph too small for the requested join count");
      std::sort(usable.begin(), usable.end(), [](const JoinEdge* a, const JoinEdge* b) {
        return std::tie(a->from_table, a->from_column, a->to_table) <
               std::tie(b->from_table, b->from_column, b->to_table);
      });
      const JoinEdge& e = *usable[rng.uniform(usable.size())];
      const bool from_in = std::count(in_scope.begin(), in_scope.end(), e.from_table) > 0;
      const std::string new_table = from_in ? e.to_table : e.from_table;
      JoinClause jc;
      jc.type = JoinType::Inner;
      jc.table = {new_table, ""};
      jc.condition = make_binary(BinaryOp::Eq, make_column(e.from_table, e.from_column),
                                 make_column(e.to_table, e.to_column));
      level->joins.push_back(std::move(jc));
      in_scope.push_back(new_table);
      joined_tables.push_back(store.schema().find_table(new_table));
    }
    const bool qualified = !level->joins.empty();

    // scalar predicates per integration
    if (target.integration == IntegrationDepth::Where) {
      add_where(*level, data_predicate(*vtable, qualified, false));
    } else if (target.integration == IntegrationDepth::Join) {
      // the filter should come from a related table; link tables made of
      // nothing but keys fall back to the vector table
      const TableDef* pred_table = vtable;
      for (const TableDef* jt : joined_tables) {
        if (jt && !predicate_columns(*jt).empty()) {
          pred_table = jt;
          break;
        }
      }
      add_where(*level, data_predicate(*pred_table, true, true));
    }

    // vector clause at the top level for Where/Join
    if (!uses_hits_cte) {
      VectorClause vc;
      vc.column = {qualified ? vtable->name : "", vcol->name};
      vc.query = keywords[0];
      vc.k = k;
      level->vector_clause = std::move(vc);
    }

    // memberships: hits CTEs attach through IN; several combine with OR so
    // the intersection cannot silently go empty
    if (!hits_names.empty()) {
      ExprPtr combined;
      for (const auto& name : hits_names) {
        ExprPtr m = membership(qualified ? vtable->name : "", vtable->primary_key, name,
                               vtable->primary_key);
        combined = combined ? make_binary(BinaryOp::Or, std::move(combined), std::move(m))
                            : std::move(m);
      }
      add_where(*level, std::move(combined));
    }

    if (scalar_cte) {
      auto pool = std::make_unique<SelectStmt>();
      pool->items.push_back({make_column("", vtable->primary_key), ""});
      pool->from = {vtable->name, ""};
      pool->where = data_predicate(*vtable, false, false);
      q.ctes.push_back({"pool0", std::move(pool)});
      add_where(*level, membership(qualified ? vtable->name : "", vtable->primary_key, "pool0",
                                   vtable->primary_key));
    }

    // projection / grouping
    if (group) {
      // group on a categorical column of the scope
      const TableDef* gt = vtable;
      auto gcols = predicate_columns(*gt);
      if (gcols.empty()) throw UnsatisfiableTargetError("no groupable column");
      const ColumnDef* gcol = gcols[rng.uniform(gcols.size())];
      const std::string qual = qualified ? gt->name : "";
      level->group_by.push_back(make_column(qual, gcol->name));
      level->items.push_back({make_column(qual, gcol->name), ""});
      level->items.push_back({make_aggregate(AggFunc::Count, nullptr), "n"});
      if (having) {
        level->having = make_binary(BinaryOp::Ge, make_aggregate(AggFunc::Count, nullptr),
                                    make_literal(Value{std::int64_t{1}}));
      }
    } else {
      const std::string qual = qualified ? vtable->name : "";
      level->items.push_back({make_column(qual, vtable->primary_key), ""});
      // a couple of readable scalar columns
      int added = 0;
      for (const auto& c : vtable->columns) {
        if (c.name == vtable->primary_key) continue;
        bool is_source = false;
        for (const auto& v : vtable->vector_columns)
          is_source = is_source || v.source_column == c.name;
        if (is_source) continue;
        level->items.push_back({make_column(qual, c.name), ""});
        if (++added == 2) break;
      }
    }

    q.select = std::move(level);

    SynthesisResult out;
    out.query = std::move(q);
    out.keywords = std::move(keywords);
    out.k = k;
    return out;
  }
};

}  // namespace

SynthesisResult synthesize_query_full(const HybridStore& store, const ComplexityTarget& target,
                                      std::uint64_t seed) {
  const std::uint64_t mixed =
      seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(target.structural) * 1009 +
      static_cast<std::uint64_t>(target.integration) * 101 +
      static_cast<std::uint64_t>(target.intent) * 11 + target.vector_ops;

  std::string last_error;
  for (int attempt = 0; attempt < 24; ++attempt) {
    Synth synth(store, target, mixed + static_cast<std::uint64_t>(attempt) * 0x51ED2701ull);
    SynthesisResult result;
    try {
      result = synth.build();
    } catch (const UnsatisfiableTargetError& e) {
      last_error = e.what();
      continue;
    }

    if (!validate_query(result.query, store.schema()).empty()) {
      last_error = "generated query failed validation";
      continue;
    }
    const ClassifyResult cls = classify(result.query);
    if (cls.structural != target.structural || cls.integration != target.integration) {
      last_error = "generated query missed the target cell";
      continue;
    }
    try {
      const ResultSet rs = exec::execute(store, result.query, exec::PreFilter{});
      if (rs.rows.empty()) {
        last_error = "generated query returned no rows";
        continue;
      }
    } catch (const std::exception& e) {
      last_error = e.what();
      continue;
    }
    return result;
  }
  throw UnsatisfiableTargetError("synthesize_query gave up after 24 attempts: " + last_error);
}

VectorSqlQuery synthesize_query(const HybridStore& store, const ComplexityTarget& target,
                                std::uint64_t seed) {
  return synthesize_query_full(store, target, seed).query;
}

// ---- question templates --------------------------------------------------------

std::vector<std::string> TemplateQuestionSource::candidates(
    IntentTier intent, const std::vector<std::string>& keywords, const std::string& table,
    std::uint64_t k, bool filtered) const {
  std::string kw;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    if (i) kw += "' and '";
    kw += keywords[i];
  }
  const std::string n = std::to_string(k);
  const std::string scope = filtered ? " that match the given filters" : "";
  std::vector<std::string> out;
  switch (intent) {
    case IntentTier::Entity:
      out = {"Find the " + n + " " + table + scope + " most similar to '" + kw + "'.",
             "Which " + n + " " + table + scope + " match '" + kw + "' most closely?",
             "Show the top " + n + " " + table + scope + " for '" + kw + "'."};
      break;
    case IntentTier::Concept:
      out = {"Find " + n + " " + table + scope + " about '" + kw + "'.",
             "I am looking for " + table + scope + " related to '" + kw + "'; give me " + n + ".",
             "List " + n + " " + table + scope + " covering '" + kw + "'."};
      break;
    case IntentTier::Reasoning:
      out = {"Which " + n + " " + table + scope + " best address the idea of '" + kw + "'?",
             "Considering the theme of '" + kw + "', pick the " + n + " most relevant " + table +
                 scope + ".",
             "Find " + n + " " + table + scope + " whose content connects to '" + kw + "'."};
      break;
  }
  return out;
}

// ---- workload pipeline -----------------------------------------------------------

std::vector<BenchmarkSample> generate_workload(const HybridStore& store,
                                               const WorkloadConfig& config,
                                               const QuestionSource* questions) {
  static const TemplateQuestionSource default_source;
  if (!questions) questions = &default_source;
  const auto embedder = store.embedder();

  struct PoolEntry {
    SynthesisResult synth;
    ComplexityTarget target;
  };
  std::vector<PoolEntry> pool;
  std::vector<ComplexityLabel> labels;

  std::size_t intent_counter = 0;
  const std::size_t per_cell = std::max<std::size_t>(1, config.quota_per_cell) *
                               std::max<std::size_t>(1, config.oversample);
  for (int st = 0; st < 4; ++st) {
    for (int in = 0; in < 3; ++in) {
      for (std::size_t j = 0; j < per_cell; ++j) {
        ComplexityTarget target;
        target.structural = static_cast<StructuralTier>(st);
        target.integration = static_cast<IntegrationDepth>(in);
        target.intent = config.intents.empty()
                            ? IntentTier::Entity
                            : config.intents[intent_counter++ % config.intents.size()];
        target.vector_ops = 1;
        const std::uint64_t seed =
            config.seed + static_cast<std::uint64_t>(st) * 7919 +
            static_cast<std::uint64_t>(in) * 127 + j * 31;
        try {
          PoolEntry entry{synthesize_query_full(store, target, seed), target};
          labels.push_back(ComplexityLabel{target.structural, target.integration,
                                           target.intent});
          pool.push_back(std::move(entry));
        } catch (const UnsatisfiableTargetError&) {
          // recorded implicitly as a stratified shortfall
        }
      }
    }
  }

  const StratifiedSelection selection =
      stratified_sample(labels, config.quota_per_cell, config.seed);

  std::vector<BenchmarkSample> samples;
  std::size_t counter = 0;
  for (std::size_t idx : selection.selected) {
    const PoolEntry& entry = pool[idx];

    // variants: the same skeleton with paraphrased EMBED payloads
    std::vector<VectorSqlQuery> variants;
    variants.push_back(entry.synth.query.clone());
    const std::size_t n_variants = std::max<std::size_t>(1, config.variants);
    for (std::size_t v = 1; v < n_variants; ++v) {
      VectorSqlQuery q = entry.synth.query.clone();
      const std::string& suffix = paraphrase_suffixes()[(v - 1) % paraphrase_suffixes().size()];
      auto retarget = [&](SelectStmt& s) {
        if (s.vector_clause && s.vector_clause->is_embed())
          s.vector_clause->query = s.vector_clause->embed_text() + " " + suffix;
      };
      for (auto& cte : q.ctes) retarget(*cte.select);
      retarget(*q.select);
      variants.push_back(std::move(q));
    }

    std::vector<std::optional<ResultSet>> executions;
    for (const auto& v : variants) {
      try {
        executions.emplace_back(exec::execute(store, v, exec::PreFilter{}));
      } catch (const std::exception&) {
        executions.emplace_back(std::nullopt);
      }
    }
    std::size_t winner;
    try {
      winner = majority_vote(executions);
    } catch (const std::exception&) {
      continue;  // every variant failed; drop the sample
    }

    ResultSet golden;
    try {
      golden = build_golden(store, variants, entry.synth.k);
    } catch (const std::exception&) {
      continue;
    }

    std::vector<std::string> keywords;
    for (const VectorClause* vc : collect_vector_clauses(variants[winner]))
      if (vc->is_embed()) keywords.push_back(vc->embed_text());

    const bool filtered = entry.target.integration != IntegrationDepth::Non;
    const auto cands = questions->candidates(entry.target.intent, keywords,
                                             entry.synth.query.select->from.table,
                                             entry.synth.k, filtered);
    BenchmarkSample sample;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "s%04zu", counter++);
    sample.id = idbuf;
    sample.question = centroid_select(cands, *embedder);
    sample.vectorsql = sql::render_canonical(variants[winner]);
    sample.golden = std::move(golden);
    sample.label = ComplexityLabel{entry.target.structural, entry.target.integration,
                                   entry.target.intent};
    sample.keywords = std::move(keywords);
    sample.reference_k = entry.synth.k;
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace vecsql::gen
