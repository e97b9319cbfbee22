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

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vecsql/types.hpp"

namespace vecsql::ann {

struct Neighbor {
  RowId id = 0;
  double distance = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// Immutable id -> vector storage with a fixed dimension. Ids iterate in
/// ascending order so scans are deterministic.
class VectorStore {
 public:
  VectorStore(std::size_t dim, Metric metric) : dim_(dim), metric_(metric) {}

  void add(RowId id, Vector v);

  std::size_t dim() const { return dim_; }
  Metric metric() const { return metric_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<RowId>& ids() const { return ids_; }
  const Vector* find(RowId id) const;
  const Vector& at(RowId id) const;

 private:
  std::size_t dim_;
  Metric metric_;
  std::vector<RowId> ids_;  // ascending
  std::unordered_map<RowId, Vector> vectors_;
};

/// Exact top-k scan: the ground-truth oracle for every approximate path.
/// Scans the whole store, or only `subset` when given. Results are sorted by
/// (distance, id) ascending and contain exactly min(k, |candidates|) entries.
std::vector<Neighbor> knn_exact(const VectorStore& store, const Vector& query, std::size_t k,
                                const std::vector<RowId>* subset = nullptr);

struct AnnParams {
  std::size_t m = 16;                // max out-degree after pruning
  std::size_t ef_construction = 128; // build-time beam width
  std::size_t ef_search = 64;        // default query beam width
};

struct AnnStats {
  std::size_t count = 0;
  std::size_t dim = 0;
  Metric metric = Metric::L2;
  AnnParams params;
  std::size_t max_degree = 0;
  double mean_degree = 0.0;
  std::size_t reachable = 0;  // nodes reachable from the entry point
};

/// Approximate nearest-neighbor graph index: a flat navigable graph searched
/// by bounded best-first (beam) traversal from a single entry point.
///
/// Construction inserts points one by one, wiring each to its closest
/// ef_construction-beam candidates (pruned to m-1) plus one protected chain
/// edge to the next inserted node. The chain keeps every node reachable from
/// the entry, so a beam of ef = size() degenerates to an exact scan.
class AnnIndex {
 public:
  AnnIndex(std::size_t dim, Metric metric, AnnParams params = {});

  void insert(RowId id, Vector v);

  /// Beam search for the k nearest stored vectors. ef is clamped up to k.
  /// Empty index yields an empty result.
  std::vector<Neighbor> search(const Vector& query, std::size_t k,
                               std::optional<std::size_t> ef = std::nullopt) const;

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  Metric metric() const { return metric_; }
  const AnnParams& params() const { return params_; }
  std::optional<RowId> entry_point() const {
    if (ids_.empty()) return std::nullopt;
    return ids_[0];
  }
  const Vector& vector_of(RowId id) const;

  AnnStats stats() const;

  /// Binary snapshot (versioned little-endian layout, see docs/formats.md).
  void save(const std::string& path) const;
  static AnnIndex load(const std::string& path);

 private:
  std::vector<std::pair<std::size_t, double>> beam_search(const Vector& query, std::size_t ef,
                                                          std::size_t cap) const;
  double dist_to(const Vector& query, std::size_t pos) const;
  void prune(std::size_t node);

  std::size_t dim_;
  Metric metric_;
  AnnParams params_;
  std::vector<RowId> ids_;          // insertion order; position 0 is the entry
  std::vector<Vector> vectors_;     // parallel to ids_
  std::vector<std::vector<std::size_t>> edges_;  // out-neighbors by position
  std::vector<bool> has_chain_;     // position i links to i+1
  std::unordered_map<RowId, std::size_t> pos_of_;
};

/// Free-function form of AnnIndex::search.
inline std::vector<Neighbor> ann_search(const AnnIndex& index, const Vector& query,
                                        std::size_t k, std::size_t ef_search) {
  return index.search(query, k, ef_search);
}

}  // namespace vecsql::ann
