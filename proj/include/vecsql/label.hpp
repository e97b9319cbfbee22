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
#include <optional>
#include <string>
#include <vector>

#include "vecsql/result.hpp"

namespace vecsql {

/// SQL-skeleton difficulty tiers.
enum class StructuralTier { Easy, Medium, Hard, ExtraHard };

/// How tightly the vector search couples to SQL predicates: independent
/// (CTE/subquery), same-level WHERE filtering, or filters from joined tables.
enum class IntegrationDepth { Non, Where, Join };

/// Cognitive difficulty of the search intent. Generation-time metadata,
/// never inferred from the AST.
enum class IntentTier { Entity, Concept, Reasoning };

std::string to_string(StructuralTier t);
std::string to_string(IntegrationDepth d);
std::string to_string(IntentTier t);
std::optional<StructuralTier> structural_tier_from_string(const std::string& s);
std::optional<IntegrationDepth> integration_from_string(const std::string& s);
std::optional<IntentTier> intent_from_string(const std::string& s);

struct ComplexityLabel {
  StructuralTier structural = StructuralTier::Easy;
  IntegrationDepth integration = IntegrationDepth::Non;
  IntentTier intent = IntentTier::Entity;

  bool operator==(const ComplexityLabel&) const = default;
};

/// One benchmark instance: question, canonical query, golden rows, label,
/// gold keywords for the vector-component score, and the annotated top-k.
struct BenchmarkSample {
  std::string id;
  std::string question;
  std::string vectorsql;  // canonical dialect text
  ResultSet golden;
  ComplexityLabel label;
  std::vector<std::string> keywords;
  std::uint64_t reference_k = 0;
};

}  // namespace vecsql
