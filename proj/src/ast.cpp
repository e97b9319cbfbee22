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

#include "vecsql/ast.hpp"

namespace vecsql {

std::string to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "OR";
    case BinaryOp::And: return "AND";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
  }
  return "?";
}

std::string to_string(AggFunc f) {
  switch (f) {
    case AggFunc::Count: return "COUNT";
    case AggFunc::Sum: return "SUM";
    case AggFunc::Avg: return "AVG";
    case AggFunc::Min: return "MIN";
    case AggFunc::Max: return "MAX";
  }
  return "?";
}

namespace {
ExprPtr clone_opt(const ExprPtr& e) { return e ? e->clone() : nullptr; }
}  // namespace

ExprPtr Expr::clone() const {
  auto out = std::make_unique<Expr>();
  out->node = std::visit(
      [](const auto& n) -> Node {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal> || std::is_same_v<T, Placeholder> ||
                      std::is_same_v<T, Column>) {
          return n;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return Unary{n.op, clone_opt(n.operand)};
        } else if constexpr (std::is_same_v<T, Binary>) {
          return Binary{n.op, clone_opt(n.lhs), clone_opt(n.rhs)};
        } else if constexpr (std::is_same_v<T, Between>) {
          return Between{clone_opt(n.subject), clone_opt(n.low), clone_opt(n.high), n.negated};
        } else if constexpr (std::is_same_v<T, InList>) {
          InList c;
          c.subject = clone_opt(n.subject);
          for (const auto& it : n.items) c.items.push_back(clone_opt(it));
          c.negated = n.negated;
          return c;
        } else if constexpr (std::is_same_v<T, InSubquery>) {
          return InSubquery{clone_opt(n.subject), n.subquery ? n.subquery->clone() : nullptr,
                            n.negated};
        } else if constexpr (std::is_same_v<T, Like>) {
          return Like{clone_opt(n.subject), clone_opt(n.pattern), n.negated};
        } else if constexpr (std::is_same_v<T, IsNull>) {
          return IsNull{clone_opt(n.subject), n.negated};
        } else {
          static_assert(std::is_same_v<T, Aggregate>);
          return Aggregate{n.func, clone_opt(n.arg)};
        }
      },
      node);
  return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, Expr::Column>) {
          return x.ref == y.ref;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return x.op == y.op && expr_equal(x.operand, y.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return x.op == y.op && expr_equal(x.lhs, y.lhs) && expr_equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Between>) {
          return x.negated == y.negated && expr_equal(x.subject, y.subject) &&
                 expr_equal(x.low, y.low) && expr_equal(x.high, y.high);
        } else if constexpr (std::is_same_v<T, Expr::InList>) {
          if (x.negated != y.negated || x.items.size() != y.items.size() ||
              !expr_equal(x.subject, y.subject))
            return false;
          for (std::size_t i = 0; i < x.items.size(); ++i)
            if (!expr_equal(x.items[i], y.items[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
          if (x.negated != y.negated || !expr_equal(x.subject, y.subject)) return false;
          if (!x.subquery || !y.subquery) return !x.subquery && !y.subquery;
          return select_equal(*x.subquery, *y.subquery);
        } else if constexpr (std::is_same_v<T, Expr::Like>) {
          return x.negated == y.negated && expr_equal(x.subject, y.subject) &&
                 expr_equal(x.pattern, y.pattern);
        } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
          return x.negated == y.negated && expr_equal(x.subject, y.subject);
        } else {
          static_assert(std::is_same_v<T, Expr::Aggregate>);
          return x.func == y.func && expr_equal(x.arg, y.arg);
        }
      },
      a.node);
}

ExprPtr make_literal(Value v) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Literal{std::move(v)};
  return e;
}

ExprPtr make_column(std::string table, std::string column) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Column{ColumnRef{std::move(table), std::move(column)}};
  return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Binary{op, std::move(lhs), std::move(rhs)};
  return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr operand) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Unary{op, std::move(operand)};
  return e;
}

ExprPtr make_aggregate(AggFunc f, ExprPtr arg) {
  auto e = std::make_unique<Expr>();
  e->node = Expr::Aggregate{f, std::move(arg)};
  return e;
}

bool vector_clause_equal(const VectorClause& a, const VectorClause& b) {
  return a.column == b.column && a.query == b.query && a.metric == b.metric && a.k == b.k;
}

SelectPtr SelectStmt::clone() const {
  auto out = std::make_unique<SelectStmt>();
  out->select_star = select_star;
  for (const auto& it : items) out->items.push_back({it.expr->clone(), it.alias});
  out->from = from;
  for (const auto& j : joins)
    out->joins.push_back({j.type, j.table, j.condition ? j.condition->clone() : nullptr});
  out->where = where ? where->clone() : nullptr;
  for (const auto& g : group_by) out->group_by.push_back(g->clone());
  out->having = having ? having->clone() : nullptr;
  if (vector_clause) {
    VectorClause vc;
    vc.column = vector_clause->column;
    vc.query = vector_clause->query;
    vc.metric = vector_clause->metric;
    vc.k = vector_clause->k;
    out->vector_clause = std::move(vc);
  }
  for (const auto& o : order_by) out->order_by.push_back({o.expr->clone(), o.descending});
  out->limit = limit;
  return out;
}

bool select_equal(const SelectStmt& a, const SelectStmt& b) {
  if (a.select_star != b.select_star || a.items.size() != b.items.size() || a.from != b.from ||
      a.joins.size() != b.joins.size() || a.group_by.size() != b.group_by.size() ||
      a.order_by.size() != b.order_by.size() || a.limit != b.limit ||
      a.vector_clause.has_value() != b.vector_clause.has_value())
    return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].alias != b.items[i].alias || !expr_equal(a.items[i].expr, b.items[i].expr))
      return false;
  }
  for (std::size_t i = 0; i < a.joins.size(); ++i) {
    if (a.joins[i].type != b.joins[i].type || a.joins[i].table != b.joins[i].table ||
        !expr_equal(a.joins[i].condition, b.joins[i].condition))
      return false;
  }
  if (!expr_equal(a.where, b.where) || !expr_equal(a.having, b.having)) return false;
  for (std::size_t i = 0; i < a.group_by.size(); ++i)
    if (!expr_equal(a.group_by[i], b.group_by[i])) return false;
  if (a.vector_clause && !vector_clause_equal(*a.vector_clause, *b.vector_clause)) return false;
  for (std::size_t i = 0; i < a.order_by.size(); ++i) {
    if (a.order_by[i].descending != b.order_by[i].descending ||
        !expr_equal(a.order_by[i].expr, b.order_by[i].expr))
      return false;
  }
  return true;
}

VectorSqlQuery VectorSqlQuery::clone() const {
  VectorSqlQuery out;
  for (const auto& c : ctes) out.ctes.push_back({c.name, c.select->clone()});
  out.select = select->clone();
  return out;
}

bool query_equal(const VectorSqlQuery& a, const VectorSqlQuery& b) {
  if (a.ctes.size() != b.ctes.size()) return false;
  for (std::size_t i = 0; i < a.ctes.size(); ++i) {
    if (a.ctes[i].name != b.ctes[i].name || !select_equal(*a.ctes[i].select, *b.ctes[i].select))
      return false;
  }
  return select_equal(*a.select, *b.select);
}

namespace {

void walk_expr(const Expr& e, const std::function<void(const SelectStmt&)>& fn);

void walk_level(const SelectStmt& s, const std::function<void(const SelectStmt&)>& fn) {
  fn(s);
  for (const auto& it : s.items) walk_expr(*it.expr, fn);
  for (const auto& j : s.joins)
    if (j.condition) walk_expr(*j.condition, fn);
  if (s.where) walk_expr(*s.where, fn);
  for (const auto& g : s.group_by) walk_expr(*g, fn);
  if (s.having) walk_expr(*s.having, fn);
  for (const auto& o : s.order_by) walk_expr(*o.expr, fn);
}

void walk_expr(const Expr& e, const std::function<void(const SelectStmt&)>& fn) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Unary>) {
          if (n.operand) walk_expr(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          if (n.lhs) walk_expr(*n.lhs, fn);
          if (n.rhs) walk_expr(*n.rhs, fn);
        } else if constexpr (std::is_same_v<T, Expr::Between>) {
          walk_expr(*n.subject, fn);
          walk_expr(*n.low, fn);
          walk_expr(*n.high, fn);
        } else if constexpr (std::is_same_v<T, Expr::InList>) {
          walk_expr(*n.subject, fn);
          for (const auto& it : n.items) walk_expr(*it, fn);
        } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
          walk_expr(*n.subject, fn);
          if (n.subquery) walk_level(*n.subquery, fn);
        } else if constexpr (std::is_same_v<T, Expr::Like>) {
          walk_expr(*n.subject, fn);
          walk_expr(*n.pattern, fn);
        } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
          walk_expr(*n.subject, fn);
        } else if constexpr (std::is_same_v<T, Expr::Aggregate>) {
          if (n.arg) walk_expr(*n.arg, fn);
        }
      },
      e.node);
}

}  // namespace

void for_each_level(const SelectStmt& s, const std::function<void(const SelectStmt&)>& fn) {
  walk_level(s, fn);
}

void for_each_level(const VectorSqlQuery& q, const std::function<void(const SelectStmt&)>& fn) {
  for (const auto& c : q.ctes) walk_level(*c.select, fn);
  walk_level(*q.select, fn);
}

std::vector<const VectorClause*> collect_vector_clauses(const VectorSqlQuery& q) {
  std::vector<const VectorClause*> out;
  for_each_level(q, [&](const SelectStmt& s) {
    if (s.vector_clause) out.push_back(&*s.vector_clause);
  });
  return out;
}

const Expr* order_sort_target(const OrderItem& item, const SelectStmt& s) {
  if (const auto* col = std::get_if<Expr::Column>(&item.expr->node)) {
    if (col->ref.table.empty()) {
      for (const auto& it : s.items)
        if (!it.alias.empty() && it.alias == col->ref.column) return it.expr.get();
    }
  }
  return item.expr.get();
}

}  // namespace vecsql
