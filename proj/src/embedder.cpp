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

#include "vecsql/embedder.hpp"

#include <cctype>
#include <cmath>

namespace vecsql {

namespace {

// FNV-1a, seeded; implemented locally so vectors are identical across
// platforms and processes (std::hash is implementation-defined).
std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ (seed * 0x9E3779B97F4A7C15ull);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed),
      id_("hash64:" + std::to_string(dim) + ":" + std::to_string(seed)) {
  if (dim_ == 0) throw std::invalid_argument("embedder dim must be positive");
}

Vector HashEmbedder::embed(const std::string& text) const {
  std::vector<double> acc(dim_, 0.0);
  std::string token;
  bool any = false;
  auto flush = [&] {
    if (token.empty()) return;
    const std::uint64_t h = fnv1a64(token, seed_);
    const std::size_t idx = h % dim_;
    acc[idx] += (h >> 63) ? 1.0 : -1.0;
    any = true;
    token.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c))
      token.push_back(static_cast<char>(std::tolower(c)));
    else
      flush();
  }
  flush();

  double norm = 0.0;
  for (double v : acc) norm += v * v;
  norm = std::sqrt(norm);
  if (!any || norm == 0.0) {
    // documented zero-input vector: e0
    std::vector<double> e0(dim_, 0.0);
    e0[0] = 1.0;
    return Vector(std::move(e0));
  }
  for (double& v : acc) v /= norm;
  return Vector(std::move(acc));
}

std::shared_ptr<const Embedder> make_embedder(const std::string& id) {
  // hash64:<dim>:<seed>
  if (id.rfind("hash64:", 0) == 0) {
    const std::size_t first = id.find(':');
    const std::size_t second = id.find(':', first + 1);
    if (second == std::string::npos)
      throw std::invalid_argument("malformed embedder id: " + id);
    const std::size_t dim = std::stoull(id.substr(first + 1, second - first - 1));
    const std::uint64_t seed = std::stoull(id.substr(second + 1));
    return std::make_shared<HashEmbedder>(dim, seed);
  }
  throw std::invalid_argument("unknown embedder id: " + id +
                              " (only hash64:<dim>:<seed> ships with the engine)");
}

std::shared_ptr<const Embedder> default_embedder() {
  static const std::shared_ptr<const Embedder> instance = std::make_shared<HashEmbedder>();
  return instance;
}

}  // namespace vecsql
