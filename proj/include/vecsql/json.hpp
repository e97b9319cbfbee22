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
//
// Canonical JSON serialization for every domain type. Field names are part
// of the interchange contract; see docs/formats.md for the full reference.

#pragma once

#include <json.hpp>

#include "vecsql/ast.hpp"
#include "vecsql/label.hpp"
#include "vecsql/result.hpp"
#include "vecsql/schema.hpp"
#include "vecsql/types.hpp"

namespace vecsql {

using Json = nlohmann::json;

/// Raised when a document does not match the expected shape.
class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json schema_to_json(const HybridSchema& s);
HybridSchema schema_from_json(const Json& j);

Json expr_to_json(const Expr& e);
ExprPtr expr_from_json(const Json& j);

Json select_to_json(const SelectStmt& s);
SelectPtr select_from_json(const Json& j);

Json query_to_json(const VectorSqlQuery& q);
VectorSqlQuery query_from_json(const Json& j);

Json result_set_to_json(const ResultSet& r);
ResultSet result_set_from_json(const Json& j);

Json label_to_json(const ComplexityLabel& l);
ComplexityLabel label_from_json(const Json& j);

Json sample_to_json(const BenchmarkSample& s);
BenchmarkSample sample_from_json(const Json& j);

}  // namespace vecsql
