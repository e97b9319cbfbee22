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
#include <stdexcept>
#include <string>
#include <variant>

#include "vecsql/ast.hpp"
#include "vecsql/result.hpp"
#include "vecsql/store.hpp"

namespace vecsql::exec {

/// Filter-then-search: evaluate SQL predicates first, then exact KNN within
/// the surviving subset. The accuracy ground truth.
struct PreFilter {
  bool operator==(const PreFilter&) const = default;
};

/// Search-then-filter: approximate KNN for k' candidates, then apply the
/// SQL predicates. k' is either absolute or a multiplier over k (default 4k).
struct PostFilter {
  std::optional<std::uint64_t> k_prime;
  std::optional<double> multiplier;

  std::uint64_t resolve_k_prime(std::uint64_t k) const {
    if (k_prime) return std::max<std::uint64_t>(*k_prime, k);
    const double m = multiplier.value_or(4.0);
    return std::max<std::uint64_t>(k, static_cast<std::uint64_t>(m * static_cast<double>(k)));
  }
  bool operator==(const PostFilter&) const = default;
};

/// Repeated search with a widening candidate budget (scan s requests
/// k + batch*(s-1) nearest) until k predicate-satisfying rows are found or
/// max_scans is exhausted.
struct Iterative {
  std::uint64_t batch = 1;
  std::uint64_t max_scans = 1;

  bool operator==(const Iterative&) const = default;
};

using ExecStrategy = std::variant<PreFilter, PostFilter, Iterative>;

/// "pre" | "post" | "post:<k'>" | "post:x<mult>" | "iter:<batch>,<max>"
ExecStrategy parse_strategy(const std::string& spec);
std::string strategy_name(const ExecStrategy& s);

class ExecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wall-clock execution budget exceeded.
class TimeoutError : public ExecError {
 public:
  using ExecError::ExecError;
};

struct ExecOptions {
  double timeout_seconds = 60.0;
};

/// Evaluates a query against the store under the given strategy. The
/// embedder resolves EMBED() texts; null uses the store's embedder. The
/// query must validate against store.schema() — resolution failures on
/// unvalidated queries surface as ExecError.
ResultSet execute(const HybridStore& store, const VectorSqlQuery& query,
                  const ExecStrategy& strategy, const Embedder* embedder = nullptr,
                  const ExecOptions& options = {});

/// Standard relational semantics for vector-free queries.
ResultSet execute_plain_sql(const HybridStore& store, const VectorSqlQuery& query,
                            const ExecOptions& options = {});

struct RecallReport {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t result_size = 0;
  std::size_t truth_size = 0;
};

/// Runs the query under `strategy` and under PreFilter (the ground truth per
/// the golden-set protocol) and reports row-id overlap. PreFilter trivially
/// scores recall 1.0.
RecallReport measure_recall(const HybridStore& store, const VectorSqlQuery& query,
                            const ExecStrategy& strategy, const Embedder* embedder = nullptr,
                            const ExecOptions& options = {});

}  // namespace vecsql::exec
