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

#include "vecsql/types.hpp"

#include <charconv>
#include <cmath>

namespace vecsql {

std::string to_string(ScalarType t) {
  switch (t) {
    case ScalarType::Integer: return "integer";
    case ScalarType::Real: return "real";
    case ScalarType::Text: return "text";
    case ScalarType::Boolean: return "boolean";
  }
  return "?";
}

std::optional<ScalarType> scalar_type_from_string(const std::string& s) {
  if (s == "integer") return ScalarType::Integer;
  if (s == "real") return ScalarType::Real;
  if (s == "text") return ScalarType::Text;
  if (s == "boolean") return ScalarType::Boolean;
  return std::nullopt;
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::L2: return "l2";
    case Metric::Cosine: return "cosine";
    case Metric::Dot: return "dot";
  }
  return "?";
}

std::optional<Metric> metric_from_string(const std::string& s) {
  if (s == "l2") return Metric::L2;
  if (s == "cosine") return Metric::Cosine;
  if (s == "dot") return Metric::Dot;
  return std::nullopt;
}

namespace {

// Rank used to order values of distinct, non-comparable types.
int type_rank(const Value& v) {
  switch (v.index()) {
    case 0: return 0;          // null
    case 1: case 2: return 1;  // numerics share a rank
    case 3: return 2;          // text
    case 4: return 3;          // boolean
  }
  return 4;
}

bool numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

}  // namespace

bool value_equal(const Value& a, const Value& b) {
  if (is_null(a) || is_null(b)) return false;
  if (numeric(a) && numeric(b)) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b))
      return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
    return as_double(a) == as_double(b);
  }
  return a == b;
}

int value_compare(const Value& a, const Value& b) {
  const int ra = type_rank(a), rb = type_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (is_null(a)) return 0;
  if (numeric(a)) {
    const double x = as_double(a), y = as_double(b);
    if (x < y) return -1;
    if (x > y) return 1;
    return 0;
  }
  if (std::holds_alternative<std::string>(a)) {
    const auto& x = std::get<std::string>(a);
    const auto& y = std::get<std::string>(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const bool x = std::get<bool>(a), y = std::get<bool>(b);
  return x == y ? 0 : (x ? 1 : -1);
}

std::string value_to_display(const Value& v) {
  switch (v.index()) {
    case 0: return "NULL";
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: {
      char buf[32];
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), std::get<double>(v));
      return std::string(buf, p);
    }
    case 3: return std::get<std::string>(v);
    case 4: return std::get<bool>(v) ? "TRUE" : "FALSE";
  }
  return "?";
}

Vector::Vector(std::vector<double> components) : components_(std::move(components)) {
  for (double c : components_) {
    if (!std::isfinite(c)) throw std::invalid_argument("vector component is not finite");
  }
}

double Vector::norm() const {
  double s = 0.0;
  for (double c : components_) s += c * c;
  return std::sqrt(s);
}

namespace {
void check_dims(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("vector dimension mismatch: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  }
}
}  // namespace

double l2_distance(const Vector& a, const Vector& b) {
  check_dims(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double cosine_distance(const Vector& a, const Vector& b) {
  check_dims(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine distance requires non-zero vectors");
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

double dot_distance(const Vector& a, const Vector& b) {
  check_dims(a, b);
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a[i] * b[i];
  return -dot;
}

double distance(Metric m, const Vector& a, const Vector& b) {
  switch (m) {
    case Metric::L2: return l2_distance(a, b);
    case Metric::Cosine: return cosine_distance(a, b);
    case Metric::Dot: return dot_distance(a, b);
  }
  throw std::invalid_argument("unknown metric");
}

}  // namespace vecsql
