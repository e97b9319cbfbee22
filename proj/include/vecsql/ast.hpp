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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vecsql/types.hpp"

namespace vecsql {

struct Expr;
struct SelectStmt;
using ExprPtr = std::unique_ptr<Expr>;
using SelectPtr = std::unique_ptr<SelectStmt>;

/// Column reference, optionally qualified by table name or alias.
struct ColumnRef {
  std::string table;  // empty when unqualified
  std::string column;

  bool operator==(const ColumnRef&) const = default;
};

enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Mod };
enum class UnaryOp { Not, Neg };
enum class AggFunc { Count, Sum, Avg, Min, Max };

std::string to_string(BinaryOp op);
std::string to_string(AggFunc f);

/// Expression tree over scalar columns. Vector search never appears here;
/// it is carried by SelectStmt::vector_clause.
struct Expr {
  struct Literal {
    Value value;
  };
  /// Positional literal placeholder (?N) produced by canonical templating.
  struct Placeholder {
    int index = 0;
  };
  struct Column {
    ColumnRef ref;
  };
  struct Unary {
    UnaryOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Between {
    ExprPtr subject;
    ExprPtr low;
    ExprPtr high;
    bool negated = false;
  };
  struct InList {
    ExprPtr subject;
    std::vector<ExprPtr> items;
    bool negated = false;
  };
  struct InSubquery {
    ExprPtr subject;
    SelectPtr subquery;
    bool negated = false;
  };
  struct Like {
    ExprPtr subject;
    ExprPtr pattern;
    bool negated = false;
  };
  struct IsNull {
    ExprPtr subject;
    bool negated = false;
  };
  struct Aggregate {
    AggFunc func = AggFunc::Count;
    ExprPtr arg;  // null for COUNT(*)
  };

  using Node = std::variant<Literal, Placeholder, Column, Unary, Binary, Between, InList,
                            InSubquery, Like, IsNull, Aggregate>;
  Node node;

  ExprPtr clone() const;
};

bool expr_equal(const Expr& a, const Expr& b);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Convenience constructors used by the generator, canonicalizer and tests.
ExprPtr make_literal(Value v);
ExprPtr make_column(std::string table, std::string column);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_unary(UnaryOp op, ExprPtr operand);
ExprPtr make_aggregate(AggFunc f, ExprPtr arg);

enum class JoinType { Inner, Left };

struct TableRef {
  std::string table;
  std::string alias;  // empty when none

  bool operator==(const TableRef&) const = default;
};

struct JoinClause {
  JoinType type = JoinType::Inner;
  TableRef table;
  ExprPtr condition;  // conjunction of column equalities (validated)
};

struct SelectItem {
  ExprPtr expr;
  std::string alias;  // empty when none
};

struct OrderItem {
  ExprPtr expr;
  bool descending = false;
};

/// Placeholder payloads inside a templated vector clause: EMBED(?N) and a
/// bare ?N in place of a literal vector. Only canonical templates carry
/// these; executable queries use the string/Vector alternatives.
struct EmbedSlot {
  int index = 0;
  bool operator==(const EmbedSlot&) const = default;
};
struct VectorSlot {
  int index = 0;
  bool operator==(const VectorSlot&) const = default;
};

/// The semantic-search directive of a SELECT level: a query vector (either
/// an EMBED()ed text or a literal vector) against one vector column, with a
/// top-k count. At most one per level; rendered as
/// `ORDER BY DISTANCE(col, EMBED('...')[, 'metric']) LIMIT k`.
struct VectorClause {
  ColumnRef column;
  std::variant<std::string, Vector, EmbedSlot, VectorSlot> query;
  std::optional<Metric> metric;  // explicit only; else schema's
  std::uint64_t k = 0;

  bool is_embed() const { return std::holds_alternative<std::string>(query); }
  const std::string& embed_text() const { return std::get<std::string>(query); }
  bool is_literal() const { return std::holds_alternative<Vector>(query); }
  const Vector& literal() const { return std::get<Vector>(query); }
};

bool vector_clause_equal(const VectorClause& a, const VectorClause& b);

/// One SELECT level. When vector_clause is set, `limit` must be empty:
/// the clause's k plays the LIMIT role and the distance ordering is the
/// primary sort key (order_by items, if any, break distance ties).
struct SelectStmt {
  bool select_star = false;
  std::vector<SelectItem> items;
  TableRef from;
  std::vector<JoinClause> joins;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
  std::optional<VectorClause> vector_clause;
  std::vector<OrderItem> order_by;
  std::optional<std::uint64_t> limit;

  SelectPtr clone() const;
};

bool select_equal(const SelectStmt& a, const SelectStmt& b);

struct CommonTableExpr {
  std::string name;
  SelectPtr select;
};

/// A parsed VectorSQL statement: optional non-recursive CTEs plus the
/// outer SELECT. Immutable after construction.
struct VectorSqlQuery {
  std::vector<CommonTableExpr> ctes;
  SelectPtr select;

  VectorSqlQuery clone() const;
};

bool query_equal(const VectorSqlQuery& a, const VectorSqlQuery& b);

/// Walks every SELECT level of the query (CTE bodies first in order, then
/// the outer statement, recursing into IN-subqueries).
void for_each_level(const VectorSqlQuery& q,
                    const std::function<void(const SelectStmt&)>& fn);
void for_each_level(const SelectStmt& s, const std::function<void(const SelectStmt&)>& fn);

/// All vector clauses in the query, in level walk order.
std::vector<const VectorClause*> collect_vector_clauses(const VectorSqlQuery& q);

/// ORDER BY may name a select-item output alias; this returns the expression
/// the sort key actually evaluates (the aliased item's expression when the
/// order expression is a bare column matching an alias, else itself).
const Expr* order_sort_target(const OrderItem& item, const SelectStmt& s);

}  // namespace vecsql
