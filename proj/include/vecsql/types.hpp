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

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vecsql {

/// Scalar column types supported by the dialect.
enum class ScalarType { Integer, Real, Text, Boolean };

std::string to_string(ScalarType t);
std::optional<ScalarType> scalar_type_from_string(const std::string& s);

/// Distance metrics for vector columns. Similarities are converted to
/// distances (cosine -> 1 - cos, dot -> -dot) so one ascending sort order
/// serves all three.
enum class Metric { L2, Cosine, Dot };

std::string to_string(Metric m);
std::optional<Metric> metric_from_string(const std::string& s);

/// Row identifier: the value of a table's integer primary key column.
using RowId = std::int64_t;

/// A SQL value. monostate is NULL.
using Value = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Numeric-aware equality: (int64)1 and (double)1.0 compare equal.
/// NULL is not equal to anything, including NULL (callers handle 3VL).
bool value_equal(const Value& a, const Value& b);

/// Total order over non-NULL values used for deterministic sorting.
/// NULL sorts before every non-NULL value. Mixed numeric types compare by
/// numeric value; otherwise values of distinct types compare by type rank.
int value_compare(const Value& a, const Value& b);

std::string value_to_display(const Value& v);

/// Dense real vector with a fixed dimension; every component finite.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> components);

  std::size_t dim() const { return components_.size(); }
  const std::vector<double>& components() const { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }

  double norm() const;

  bool operator==(const Vector& other) const = default;

 private:
  std::vector<double> components_;
};

double l2_distance(const Vector& a, const Vector& b);
double cosine_distance(const Vector& a, const Vector& b);
double dot_distance(const Vector& a, const Vector& b);

/// Dispatch on metric. Throws std::invalid_argument on dimension mismatch
/// and, for cosine, on zero-norm inputs.
double distance(Metric m, const Vector& a, const Vector& b);

}  // namespace vecsql
