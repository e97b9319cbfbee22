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

#include <memory>
#include <string>

#include "vecsql/types.hpp"

namespace vecsql {

/// Pure text -> vector mapping. Implementations must be deterministic
/// (equal texts give equal vectors), fixed-dimension and unit-norm. Real
/// encoder backends plug in behind this interface; the engine ships only the
/// dependency-free hash embedder below.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual const std::string& id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual Vector embed(const std::string& text) const = 0;
};

/// Seeded token-hash bag-of-features projection, L2-normalized. Tokens are
/// lowercased alphanumeric runs; each token adds +-1 (sign from its hash) to
/// one component. Texts with no tokens embed to the fixed unit vector e0,
/// as does the degenerate case of full cancellation.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dim = 64, std::uint64_t seed = 1);

  const std::string& id() const override { return id_; }
  std::size_t dim() const override { return dim_; }
  Vector embed(const std::string& text) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::string id_;
};

/// Resolves an embedder id ("hash64:<dim>:<seed>") back to an instance.
/// Throws std::invalid_argument for unknown families.
std::shared_ptr<const Embedder> make_embedder(const std::string& id);

/// The repo default: hash64:64:1.
std::shared_ptr<const Embedder> default_embedder();

}  // namespace vecsql
