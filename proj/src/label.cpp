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

#include "vecsql/label.hpp"

namespace vecsql {

std::string to_string(StructuralTier t) {
  switch (t) {
    case StructuralTier::Easy: return "easy";
    case StructuralTier::Medium: return "medium";
    case StructuralTier::Hard: return "hard";
    case StructuralTier::ExtraHard: return "extra_hard";
  }
  return "?";
}

std::string to_string(IntegrationDepth d) {
  switch (d) {
    case IntegrationDepth::Non: return "non";
    case IntegrationDepth::Where: return "where";
    case IntegrationDepth::Join: return "join";
  }
  return "?";
}

std::string to_string(IntentTier t) {
  switch (t) {
    case IntentTier::Entity: return "entity";
    case IntentTier::Concept: return "concept";
    case IntentTier::Reasoning: return "reasoning";
  }
  return "?";
}

std::optional<StructuralTier> structural_tier_from_string(const std::string& s) {
  if (s == "easy") return StructuralTier::Easy;
  if (s == "medium") return StructuralTier::Medium;
  if (s == "hard") return StructuralTier::Hard;
  if (s == "extra_hard") return StructuralTier::ExtraHard;
  return std::nullopt;
}

std::optional<IntegrationDepth> integration_from_string(const std::string& s) {
  if (s == "non") return IntegrationDepth::Non;
  if (s == "where") return IntegrationDepth::Where;
  if (s == "join") return IntegrationDepth::Join;
  return std::nullopt;
}

std::optional<IntentTier> intent_from_string(const std::string& s) {
  if (s == "entity") return IntentTier::Entity;
  if (s == "concept") return IntentTier::Concept;
  if (s == "reasoning") return IntentTier::Reasoning;
  return std::nullopt;
}

}  // namespace vecsql
