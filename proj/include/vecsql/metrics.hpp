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

#include <string>
#include <vector>

#include "vecsql/ast.hpp"
#include "vecsql/embedder.hpp"
#include "vecsql/json.hpp"
#include "vecsql/types.hpp"

namespace vecsql::metrics {

struct SetScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision = |pred ∩ gold| / |pred|, Recall = |pred ∩ gold| / |gold|,
/// F1 = harmonic mean (0 when both are 0). Empty pred scores (0, 0, 0);
/// empty gold is a contract violation and throws.
SetScores set_scores(const std::vector<RowId>& pred, const std::vector<RowId>& gold);

/// Binary-relevance nDCG@k with log2 discounting, rank 1-based. rel_i = 1
/// iff pred[i] is in gold. IDCG places min(k, |gold|) ones at the top.
/// Empty pred scores 0. Requires k >= 1.
double ndcg_at_k(const std::vector<RowId>& pred, const std::vector<RowId>& gold, std::size_t k);

/// Reciprocal rank fusion: score(id) = sum over rankings containing id of
/// 1 / (c + rank), rank starting at 1; output by score descending, ties by
/// ascending id. Within one ranking only an id's first occurrence counts.
std::vector<RowId> rrf_fuse(const std::vector<std::vector<RowId>>& rankings, double c = 60.0);

/// Same fusion with the scores exposed, in output order.
std::vector<std::pair<RowId, double>> rrf_fuse_scored(
    const std::vector<std::vector<RowId>>& rankings, double c = 60.0);

/// SQL-skeleton accuracy: 1 iff the canonicalized non-vector components
/// (FROM/JOIN sets, SELECT projections order-insensitively, WHERE trees
/// AND/OR-commutativity-normalized, GROUP BY sets, non-vector ORDER BY
/// lists) all match. Vector clauses, k and LIMIT are excluded; table
/// aliases and CTE names are normalized away.
int acc_sql(const VectorSqlQuery& pred, const VectorSqlQuery& gold);

/// Vector-component accuracy: 0 when the predicted vector-column set differs
/// from the gold set; otherwise the mean cosine similarity (clamped to
/// [0,1]) over greedily best-matched keyword pairs.
double acc_vec(const VectorSqlQuery& pred_query, const std::vector<ColumnRef>& gold_columns,
               const std::vector<std::string>& pred_keywords,
               const std::vector<std::string>& gold_keywords, const Embedder& embedder);

/// Full per-sample scorecard.
struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double ndcg_at_k = 0.0;
  int acc_sql = 0;
  double acc_vec = 0.0;
  bool execution_success = false;
};

Json score_report_to_json(const ScoreReport& r);
ScoreReport score_report_from_json(const Json& j);
std::string score_report_csv_header();
std::string score_report_csv_row(const ScoreReport& r);

}  // namespace vecsql::metrics
