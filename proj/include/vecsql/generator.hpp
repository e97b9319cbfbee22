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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecsql/ast.hpp"
#include "vecsql/label.hpp"
#include "vecsql/store.hpp"

namespace vecsql::gen {

/// Deterministic RNG (splitmix64). std::uniform_* distributions are
/// implementation-defined across standard libraries, so every draw here is
/// explicit arithmetic and reproduces bit-for-bit everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::size_t uniform(std::size_t n);  // in [0, n); n = 0 yields 0
  double unit();                       // in [0, 1)

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(i)]);
  }

 private:
  std::uint64_t state_;
};

struct ComplexityTarget {
  StructuralTier structural = StructuralTier::Easy;
  IntegrationDepth integration = IntegrationDepth::Non;
  IntentTier intent = IntentTier::Entity;
  std::size_t vector_ops = 1;
};

/// classify() output: integration and structural come from the AST; intent
/// is never inferred. Plain SQL (no vector clause) reports Non + plain_sql.
struct ClassifyResult {
  StructuralTier structural = StructuralTier::Easy;
  IntegrationDepth integration = IntegrationDepth::Non;
  bool plain_sql = false;

  ComplexityLabel with_intent(IntentTier intent) const {
    return ComplexityLabel{structural, integration, intent};
  }
};

/// Structural rubric (documented constants): score = joins + 2*aggregation +
/// having + CTE count; Easy <= 1, Medium == 2, Hard == 3, ExtraHard >= 4.
/// Integration: a vector clause inside a CTE or subquery is Non; at the
/// outer level it is Join when that level has joins, else Where when it has
/// a scalar WHERE, else Non. Multiple clauses take the deepest integration.
ClassifyResult classify(const VectorSqlQuery& query);

struct RubricWeights {
  int join = 1;
  int aggregation = 2;
  int having = 1;
  int cte = 1;
  int easy_max = 1;
  int medium_max = 2;
  int hard_max = 3;
};
const RubricWeights& rubric();

class UnsatisfiableTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SynthesisResult {
  VectorSqlQuery query;
  std::vector<std::string> keywords;  // EMBED payloads, in clause order
  std::uint64_t k = 0;
};

/// Deterministic query synthesis: same (store, target, seed) yields
/// byte-identical canonical text. The result validates, classifies back to
/// the target's structural/integration cell and returns rows under
/// PreFilter. Throws UnsatisfiableTargetError when the schema cannot host
/// the target.
SynthesisResult synthesize_query_full(const HybridStore& store, const ComplexityTarget& target,
                                      std::uint64_t seed);
VectorSqlQuery synthesize_query(const HybridStore& store, const ComplexityTarget& target,
                                std::uint64_t seed);

struct StratifiedSelection {
  std::vector<std::size_t> selected;  // indices into the pool, sorted
  // cells whose supply was below quota: (cell, shortfall)
  std::vector<std::pair<ComplexityLabel, std::size_t>> shortfalls;
};

/// Per-(structural x integration) cell sampling: min(quota, cell size)
/// deterministic picks per cell.
StratifiedSelection stratified_sample(const std::vector<ComplexityLabel>& pool_labels,
                                      std::size_t quota_per_cell, std::uint64_t seed);

/// The candidate whose embedding is closest (L2) to the mean embedding;
/// ties resolve to the earliest candidate.
std::string centroid_select(const std::vector<std::string>& candidates,
                            const Embedder& embedder);

/// Majority voting over executed variants: the majority set holds row ids
/// appearing in more than half of the successful results (falling back to
/// plurality when no id reaches a strict majority); the winner is the first
/// candidate maximizing overlap with that set. Returns the winner's index;
/// throws when every execution failed.
std::size_t majority_vote(const std::vector<std::optional<ResultSet>>& executions);

/// Golden-set construction: every variant runs under PreFilter, the id
/// rankings are fused with RRF (c = 60), and rows are materialized from the
/// earliest variant producing each id. Distances are dropped (they are not
/// comparable across variants).
ResultSet build_golden(const HybridStore& store, const std::vector<VectorSqlQuery>& variants,
                       std::uint64_t k);

/// Pluggable natural-language question source standing in for LLM
/// back-translation. Implementations must be deterministic.
class QuestionSource {
 public:
  virtual ~QuestionSource() = default;
  virtual std::vector<std::string> candidates(IntentTier intent,
                                              const std::vector<std::string>& keywords,
                                              const std::string& table, std::uint64_t k,
                                              bool filtered) const = 0;
};

/// Default template-based source (not a faithful reproduction of LLM
/// stylistic diversity; it exists so the pipeline runs offline).
class TemplateQuestionSource final : public QuestionSource {
 public:
  std::vector<std::string> candidates(IntentTier intent,
                                      const std::vector<std::string>& keywords,
                                      const std::string& table, std::uint64_t k,
                                      bool filtered) const override;
};

// ---- seeded demo dataset ----------------------------------------------------

struct SeedDataConfig {
  std::uint64_t seed = 42;
  std::size_t papers = 1000;
  std::size_t venues = 40;
  std::size_t authors = 200;
  std::size_t authorships = 1500;
};

struct SeedDataset {
  HybridSchema schema;  // scalar-only
  std::map<std::string, std::vector<StoreRow>> rows;
  std::vector<VectorizeSpec> specs;
};

/// Deterministic relational corpus (papers/venues/authors/authorship) with
/// two text columns configured for vectorization. The venue join key is
/// selective by design, which is what drives the recall-degradation
/// reproduction.
SeedDataset make_seed_dataset(const SeedDataConfig& config = {});
HybridStore make_seed_store(const SeedDataConfig& config = {},
                            std::shared_ptr<const Embedder> embedder = nullptr,
                            ann::AnnParams params = {});

// ---- full workload pipeline -------------------------------------------------

struct WorkloadConfig {
  std::uint64_t seed = 42;
  std::size_t quota_per_cell = 2;  // per (structural x integration) cell
  std::size_t oversample = 2;      // pool multiplier before stratified sampling
  std::size_t variants = 3;        // PreFilter variants fused into the golden set
  std::vector<IntentTier> intents = {IntentTier::Entity, IntentTier::Concept,
                                     IntentTier::Reasoning};
};

/// Synthesis, stratified sampling, majority-vote canonicalization,
/// golden-set fusion and question selection in one deterministic pass.
std::vector<BenchmarkSample> generate_workload(const HybridStore& store,
                                               const WorkloadConfig& config,
                                               const QuestionSource* questions = nullptr);

}  // namespace vecsql::gen
