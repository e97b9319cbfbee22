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

#include "vecsql/ann.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <queue>

namespace vecsql::ann {

void VectorStore::add(RowId id, Vector v) {
  if (v.dim() != dim_)
    throw std::invalid_argument("vector dimension mismatch: expected " + std::to_string(dim_) +
                                ", got " + std::to_string(v.dim()));
  auto [it, inserted] = vectors_.emplace(id, std::move(v));
  if (!inserted) throw std::invalid_argument("duplicate row id: " + std::to_string(id));
  auto pos = std::lower_bound(ids_.begin(), ids_.end(), id);
  ids_.insert(pos, id);
}

const Vector* VectorStore::find(RowId id) const {
  auto it = vectors_.find(id);
  return it == vectors_.end() ? nullptr : &it->second;
}

const Vector& VectorStore::at(RowId id) const {
  const Vector* v = find(id);
  if (!v) throw std::out_of_range("row id not in store: " + std::to_string(id));
  return *v;
}

std::vector<Neighbor> knn_exact(const VectorStore& store, const Vector& query, std::size_t k,
                                const std::vector<RowId>* subset) {
  if (query.dim() != store.dim())
    throw std::invalid_argument("query dimension mismatch: expected " +
                                std::to_string(store.dim()) + ", got " +
                                std::to_string(query.dim()));
  std::vector<Neighbor> all;
  auto consider = [&](RowId id) {
    if (const Vector* v = store.find(id))
      all.push_back({id, distance(store.metric(), query, *v)});
  };
  if (subset) {
    all.reserve(subset->size());
    for (RowId id : *subset) consider(id);
  } else {
    all.reserve(store.size());
    for (RowId id : store.ids()) consider(id);
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

AnnIndex::AnnIndex(std::size_t dim, Metric metric, AnnParams params)
    : dim_(dim), metric_(metric), params_(params) {
  if (params_.m < 2) throw std::invalid_argument("graph degree bound m must be >= 2");
}

double AnnIndex::dist_to(const Vector& query, std::size_t pos) const {
  return distance(metric_, query, vectors_[pos]);
}

const Vector& AnnIndex::vector_of(RowId id) const {
  auto it = pos_of_.find(id);
  if (it == pos_of_.end()) throw std::out_of_range("row id not in index: " + std::to_string(id));
  return vectors_[it->second];
}

void AnnIndex::insert(RowId id, Vector v) {
  if (v.dim() != dim_)
    throw std::invalid_argument("vector dimension mismatch: expected " + std::to_string(dim_) +
                                ", got " + std::to_string(v.dim()));
  if (pos_of_.count(id)) throw std::invalid_argument("duplicate row id: " + std::to_string(id));

  const std::size_t pos = ids_.size();
  // Beam-search candidates before the new node joins the graph.
  std::vector<std::pair<std::size_t, double>> candidates;
  if (pos > 0) candidates = beam_search(v, params_.ef_construction, params_.ef_construction);

  ids_.push_back(id);
  vectors_.push_back(std::move(v));
  edges_.emplace_back();
  has_chain_.push_back(false);
  pos_of_[id] = pos;

  if (pos == 0) return;

  // Protected chain edge: predecessor in insertion order points here, which
  // keeps the whole graph reachable from the entry point.
  edges_[pos - 1].push_back(pos);
  has_chain_[pos - 1] = true;

  const std::size_t fanout = params_.m - 1;  // one slot is reserved for the chain
  const std::size_t take = std::min(fanout, candidates.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t nb = candidates[i].first;
    edges_[pos].push_back(nb);
    edges_[nb].push_back(pos);
    prune(nb);
  }
}

// Keeps the chain edge plus the m-1 closest remaining out-neighbors.
void AnnIndex::prune(std::size_t node) {
  const std::size_t chain_target = node + 1;
  auto& out = edges_[node];
  const bool chained = has_chain_[node];
  std::size_t non_chain = out.size() - (chained ? 1 : 0);
  if (non_chain <= params_.m - 1) return;

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(out.size());
  for (std::size_t nb : out) {
    if (chained && nb == chain_target) continue;
    ranked.emplace_back(distance(metric_, vectors_[node], vectors_[nb]), nb);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return ids_[a.second] < ids_[b.second];
  });
  ranked.resize(params_.m - 1);

  out.clear();
  if (chained) out.push_back(chain_target);
  for (const auto& [d, nb] : ranked) out.push_back(nb);
}

std::vector<std::pair<std::size_t, double>> AnnIndex::beam_search(const Vector& query,
                                                                  std::size_t ef,
                                                                  std::size_t cap) const {
  // (distance, position) heaps; ties broken by id for determinism.
  using Entry = std::pair<double, std::size_t>;
  auto better = [&](const Entry& a, const Entry& b) {  // strict "closer than"
    if (a.first != b.first) return a.first < b.first;
    return ids_[a.second] < ids_[b.second];
  };
  auto frontier_cmp = [&](const Entry& a, const Entry& b) { return better(b, a); };  // min-heap
  auto result_cmp = [&](const Entry& a, const Entry& b) { return better(a, b); };    // max-heap

  std::priority_queue<Entry, std::vector<Entry>, decltype(frontier_cmp)> frontier(frontier_cmp);
  std::priority_queue<Entry, std::vector<Entry>, decltype(result_cmp)> best(result_cmp);
  std::vector<bool> visited(ids_.size(), false);

  const Entry start{dist_to(query, 0), 0};
  frontier.push(start);
  best.push(start);
  visited[0] = true;

  while (!frontier.empty()) {
    const Entry cur = frontier.top();
    frontier.pop();
    if (best.size() >= ef && better(best.top(), cur)) break;
    for (std::size_t nb : edges_[cur.second]) {
      if (visited[nb]) continue;
      visited[nb] = true;
      const Entry cand{dist_to(query, nb), nb};
      if (best.size() < ef || better(cand, best.top())) {
        frontier.push(cand);
        best.push(cand);
        if (best.size() > ef) best.pop();
      }
    }
  }

  std::vector<Entry> out;
  out.reserve(best.size());
  while (!best.empty()) {
    out.push_back(best.top());
    best.pop();
  }
  std::sort(out.begin(), out.end(), better);
  if (out.size() > cap) out.resize(cap);
  std::vector<std::pair<std::size_t, double>> result;
  result.reserve(out.size());
  for (const auto& [d, p] : out) result.emplace_back(p, d);
  return result;
}

std::vector<Neighbor> AnnIndex::search(const Vector& query, std::size_t k,
                                       std::optional<std::size_t> ef) const {
  if (query.dim() != dim_)
    throw std::invalid_argument("query dimension mismatch: expected " + std::to_string(dim_) +
                                ", got " + std::to_string(query.dim()));
  if (ids_.empty()) return {};
  const std::size_t beam = std::max(ef.value_or(params_.ef_search), k);
  auto found = beam_search(query, beam, k);
  std::vector<Neighbor> out;
  out.reserve(found.size());
  for (const auto& [pos, d] : found) out.push_back({ids_[pos], d});
  return out;
}

AnnStats AnnIndex::stats() const {
  AnnStats s;
  s.count = ids_.size();
  s.dim = dim_;
  s.metric = metric_;
  s.params = params_;
  std::size_t total = 0;
  for (const auto& out : edges_) {
    s.max_degree = std::max(s.max_degree, out.size());
    total += out.size();
  }
  s.mean_degree = ids_.empty() ? 0.0 : static_cast<double>(total) / ids_.size();
  // BFS from the entry point
  if (!ids_.empty()) {
    std::vector<bool> seen(ids_.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      ++s.reachable;
      for (std::size_t v : edges_[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return s;
}

namespace {

constexpr char kMagic[8] = {'V', 'S', 'Q', 'L', 'A', 'N', 'N', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated index snapshot");
  return v;
}

}  // namespace

void AnnIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(metric_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params_.m));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params_.ef_construction));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params_.ef_search));
  put<std::uint64_t>(out, ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    put<std::int64_t>(out, ids_[i]);
    for (double c : vectors_[i].components()) put<double>(out, c);
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(edges_[i].size()));
    put<std::uint8_t>(out, has_chain_[i] ? 1 : 0);
    for (std::size_t nb : edges_[i]) put<std::uint64_t>(out, nb);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

AnnIndex AnnIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index snapshot: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not an index snapshot: " + path);
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion)
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  const auto dim = get<std::uint32_t>(in);
  const auto metric = static_cast<Metric>(get<std::uint8_t>(in));
  AnnParams params;
  params.m = get<std::uint32_t>(in);
  params.ef_construction = get<std::uint32_t>(in);
  params.ef_search = get<std::uint32_t>(in);
  AnnIndex idx(dim, metric, params);
  const auto count = get<std::uint64_t>(in);
  idx.ids_.reserve(count);
  idx.vectors_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const RowId id = get<std::int64_t>(in);
    std::vector<double> comps(dim);
    for (auto& c : comps) c = get<double>(in);
    idx.ids_.push_back(id);
    idx.vectors_.emplace_back(std::move(comps));
    idx.pos_of_[id] = i;
  }
  idx.edges_.resize(count);
  idx.has_chain_.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto degree = get<std::uint32_t>(in);
    idx.has_chain_[i] = get<std::uint8_t>(in) != 0;
    idx.edges_[i].reserve(degree);
    for (std::uint32_t e = 0; e < degree; ++e) {
      const auto nb = get<std::uint64_t>(in);
      if (nb >= count) throw std::runtime_error("corrupt snapshot: edge out of range");
      idx.edges_[i].push_back(nb);
    }
  }
  return idx;
}

}  // namespace vecsql::ann
