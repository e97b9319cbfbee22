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

#include "vecsql/validate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_set>

#include "vecsql/render.hpp"

namespace vecsql {

namespace {

// Column type as seen by the checker. nullopt = unknown (NULL literals,
// placeholders); unknown unifies with anything.
using MaybeType = std::optional<ScalarType>;

bool numeric_type(ScalarType t) { return t == ScalarType::Integer || t == ScalarType::Real; }

bool comparable(MaybeType a, MaybeType b) {
  if (!a || !b) return true;
  if (numeric_type(*a) && numeric_type(*b)) return true;
  return *a == *b;
}

struct SourceColumns {
  std::string name;  // alias if given, else table/CTE name
  std::vector<std::pair<std::string, ScalarType>> columns;
  const TableDef* base = nullptr;  // null for CTE sources
};

struct CteInfo {
  std::vector<std::pair<std::string, ScalarType>> columns;
};

class Checker {
 public:
  Checker(const HybridSchema& schema, std::vector<Diagnostic>& out)
      : schema_(schema), out_(out) {}

  void check_query(const VectorSqlQuery& q) {
    std::unordered_set<std::string> names;
    for (const auto& cte : q.ctes) {
      if (!names.insert(cte.name).second)
        diag("duplicate-cte", "duplicate CTE name '" + cte.name + "'", cte.name);
      auto cols = check_select(*cte.select, /*for_cte=*/true, "CTE " + cte.name);
      ctes_[cte.name] = CteInfo{std::move(cols)};
    }
    check_select(*q.select, false, "outer query");
  }

 private:
  void diag(std::string code, std::string message, std::string where) {
    out_.push_back({std::move(code), std::move(message), std::move(where)});
  }

  // Returns the output column list (name, type) of the level.
  std::vector<std::pair<std::string, ScalarType>> check_select(const SelectStmt& s, bool for_cte,
                                                               const std::string& ctx) {
    std::vector<SourceColumns> scope;
    if (!s.from.table.empty()) add_source(scope, s.from, ctx);
    for (const auto& j : s.joins) {
      // condition checked against prior sources plus the joined table
      std::vector<SourceColumns> prior = scope;
      add_source(scope, j.table, ctx);
      if (j.condition)
        check_join_condition(*j.condition, prior, scope, ctx);
      else
        diag("join-missing-on", "join lacks an ON condition", ctx);
    }

    if (s.where) {
      if (contains_aggregate(*s.where))
        diag("aggregate-in-where", "aggregates are not allowed in WHERE", render(*s.where));
      auto t = infer(*s.where, scope, ctx);
      if (t && *t != ScalarType::Boolean)
        diag("where-not-boolean", "WHERE predicate must be boolean", render(*s.where));
    }

    for (const auto& g : s.group_by) {
      if (contains_aggregate(*g))
        diag("aggregate-in-group-by", "aggregates are not allowed in GROUP BY", render(*g));
      infer(*g, scope, ctx);
    }

    const bool grouped = !s.group_by.empty();
    bool any_agg = s.having && contains_aggregate(*s.having);
    for (const auto& it : s.items)
      any_agg = any_agg || contains_aggregate(*it.expr);
    for (const auto& o : s.order_by) any_agg = any_agg || contains_aggregate(*o.expr);
    const bool aggregate_level = grouped || any_agg;

    if (s.select_star && aggregate_level)
      diag("star-with-aggregation", "SELECT * cannot be combined with aggregation", ctx);
    if (s.select_star && scope.empty())
      diag("star-without-from", "SELECT * requires a FROM clause", ctx);

    std::vector<std::pair<std::string, ScalarType>> output;
    if (s.select_star) {
      for (const auto& src : scope)
        for (const auto& [n, t] : src.columns) output.emplace_back(n, t);
    } else {
      for (const auto& it : s.items) {
        auto t = infer(*it.expr, scope, ctx);
        if (aggregate_level) check_grouped_expr(*it.expr, s, scope, ctx);
        std::string name = it.alias;
        if (name.empty()) {
          if (const auto* col = std::get_if<Expr::Column>(&it.expr->node))
            name = col->ref.column;
          else if (for_cte)
            diag("cte-unnamed-column",
                 "expression select items inside a CTE require an AS alias", render(*it.expr));
        }
        output.emplace_back(name, t.value_or(ScalarType::Text));
      }
    }

    if (s.having) {
      if (!grouped && !any_agg)
        diag("having-without-group", "HAVING requires GROUP BY or aggregation", ctx);
      auto t = infer(*s.having, scope, ctx);
      if (t && *t != ScalarType::Boolean)
        diag("having-not-boolean", "HAVING predicate must be boolean", render(*s.having));
      if (grouped) check_grouped_expr(*s.having, s, scope, ctx);
    }

    for (const auto& o : s.order_by) {
      const Expr* target = order_sort_target(o, s);
      infer(*target, scope, ctx);
      if (aggregate_level) check_grouped_expr(*target, s, scope, ctx);
    }

    if (s.vector_clause) check_vector_clause(*s.vector_clause, s, scope, ctx);

    return output;
  }

  void add_source(std::vector<SourceColumns>& scope, const TableRef& ref, const std::string& ctx) {
    SourceColumns src;
    src.name = ref.alias.empty() ? ref.table : ref.alias;
    for (const auto& other : scope) {
      if (other.name == src.name)
        diag("duplicate-source", "duplicate table name or alias '" + src.name + "'", ctx);
    }
    if (auto it = ctes_.find(ref.table); it != ctes_.end()) {
      src.columns = it->second.columns;
    } else if (const TableDef* t = schema_.find_table(ref.table)) {
      src.base = t;
      for (const auto& c : t->columns) src.columns.emplace_back(c.name, c.type);
    } else {
      diag("unknown-table", "unknown table '" + ref.table + "'", ref.table);
    }
    scope.push_back(std::move(src));
  }

  void check_join_condition(const Expr& cond, const std::vector<SourceColumns>& prior,
                            const std::vector<SourceColumns>& full, const std::string& ctx) {
    // conjunction of column equalities, one side from the joined table
    if (const auto* b = std::get_if<Expr::Binary>(&cond.node)) {
      if (b->op == BinaryOp::And) {
        check_join_condition(*b->lhs, prior, full, ctx);
        check_join_condition(*b->rhs, prior, full, ctx);
        return;
      }
      if (b->op == BinaryOp::Eq) {
        const auto* lc = std::get_if<Expr::Column>(&b->lhs->node);
        const auto* rc = std::get_if<Expr::Column>(&b->rhs->node);
        if (lc && rc) {
          auto lt = resolve_column(lc->ref, full, ctx);
          auto rt = resolve_column(rc->ref, full, ctx);
          if (lt && rt && !comparable(lt, rt))
            diag("join-type-mismatch", "join key types are not comparable", render(cond));
          return;
        }
      }
    }
    diag("non-equi-join", "join conditions must be conjunctions of column equalities",
         render(cond));
  }

  void check_vector_clause(const VectorClause& vc, const SelectStmt& s,
                           const std::vector<SourceColumns>& scope, const std::string& ctx) {
    if (vc.k < 1) diag("k-not-positive", "k must be >= 1", "LIMIT " + std::to_string(vc.k));
    if (s.limit)
      diag("limit-with-vector", "a level with a vector clause carries k as its LIMIT", ctx);

    const VectorColumnDef* def = nullptr;
    const SourceColumns* owner = nullptr;
    for (const auto& src : scope) {
      if (!src.base) continue;
      if (!vc.column.table.empty() && vc.column.table != src.name) continue;
      if (const auto* d = src.base->find_vector_column(vc.column.column)) {
        if (def) {
          diag("ambiguous-column", "ambiguous vector column '" + vc.column.column + "'",
               render_ref(vc.column));
          return;
        }
        def = d;
        owner = &src;
      }
    }
    if (!def) {
      diag("unknown-vector-column",
           "unknown vector column '" + render_ref(vc.column) + "'", render_ref(vc.column));
      return;
    }
    (void)owner;
    if (vc.metric && *vc.metric != def->metric)
      diag("metric-mismatch",
           "explicit metric '" + to_string(*vc.metric) + "' conflicts with column metric '" +
               to_string(def->metric) + "'",
           render_ref(vc.column));
    if (vc.is_literal() && vc.literal().dim() != def->dim)
      diag("vector-dim-mismatch",
           "literal vector dim " + std::to_string(vc.literal().dim()) +
               " does not match column dim " + std::to_string(def->dim),
           render_ref(vc.column));
  }

  static std::string render_ref(const ColumnRef& r) {
    return r.table.empty() ? r.column : r.table + "." + r.column;
  }

  // A rendered snippet is enough to locate the node; token positions are
  // recoverable from sql::tokenize when callers need exact coordinates.
  static std::string render(const Expr& e) { return sql::render_expr(e); }
  static std::string snippet(const Expr& e) { return sql::render_expr(e); }

  MaybeType resolve_column(const ColumnRef& ref, const std::vector<SourceColumns>& scope,
                           const std::string& ctx) {
    const std::pair<std::string, ScalarType>* found = nullptr;
    int matches = 0;
    for (const auto& src : scope) {
      if (!ref.table.empty() && ref.table != src.name) continue;
      for (const auto& col : src.columns) {
        if (col.first == ref.column) {
          ++matches;
          found = &col;
        }
      }
      // scalar references to vector columns are invalid; report distinctly
      if (src.base && src.base->find_vector_column(ref.column) &&
          (ref.table.empty() || ref.table == src.name)) {
        diag("vector-column-in-expression",
             "vector column '" + ref.column + "' cannot appear in a scalar expression",
             render_ref(ref));
        return std::nullopt;
      }
    }
    if (matches == 0) {
      diag("unknown-column", "unknown column '" + render_ref(ref) + "'", render_ref(ref));
      return std::nullopt;
    }
    if (matches > 1) {
      diag("ambiguous-column", "ambiguous column '" + render_ref(ref) + "'", render_ref(ref));
      return std::nullopt;
    }
    (void)ctx;
    return found->second;
  }

  static bool contains_aggregate(const Expr& e) {
    bool found = false;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Aggregate>) {
            found = true;
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            found = contains_aggregate(*n.operand);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            found = contains_aggregate(*n.lhs) || contains_aggregate(*n.rhs);
          } else if constexpr (std::is_same_v<T, Expr::Between>) {
            found = contains_aggregate(*n.subject) || contains_aggregate(*n.low) ||
                    contains_aggregate(*n.high);
          } else if constexpr (std::is_same_v<T, Expr::InList>) {
            found = contains_aggregate(*n.subject);
            for (const auto& it : n.items) found = found || contains_aggregate(*it);
          } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
            found = contains_aggregate(*n.subject);
          } else if constexpr (std::is_same_v<T, Expr::Like>) {
            found = contains_aggregate(*n.subject) || contains_aggregate(*n.pattern);
          } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
            found = contains_aggregate(*n.subject);
          }
        },
        e.node);
    return found;
  }

  // In a grouped/aggregated level, non-aggregate parts must match a GROUP BY
  // expression.
  void check_grouped_expr(const Expr& e, const SelectStmt& s,
                          const std::vector<SourceColumns>& scope, const std::string& ctx) {
    for (const auto& g : s.group_by)
      if (expr_equal(e, *g)) return;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Column>) {
            diag("column-not-grouped",
                 "column '" + render_ref(n.ref) + "' must appear in GROUP BY or an aggregate",
                 render_ref(n.ref));
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            check_grouped_expr(*n.operand, s, scope, ctx);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            check_grouped_expr(*n.lhs, s, scope, ctx);
            check_grouped_expr(*n.rhs, s, scope, ctx);
          } else if constexpr (std::is_same_v<T, Expr::Between>) {
            check_grouped_expr(*n.subject, s, scope, ctx);
            check_grouped_expr(*n.low, s, scope, ctx);
            check_grouped_expr(*n.high, s, scope, ctx);
          } else if constexpr (std::is_same_v<T, Expr::InList>) {
            check_grouped_expr(*n.subject, s, scope, ctx);
          } else if constexpr (std::is_same_v<T, Expr::Like>) {
            check_grouped_expr(*n.subject, s, scope, ctx);
            check_grouped_expr(*n.pattern, s, scope, ctx);
          } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
            check_grouped_expr(*n.subject, s, scope, ctx);
          }
          // literals, placeholders and aggregates are always fine
        },
        e.node);
  }

  MaybeType infer(const Expr& e, const std::vector<SourceColumns>& scope,
                  const std::string& ctx) {
    return std::visit(
        [&](const auto& n) -> MaybeType {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Literal>) {
            switch (n.value.index()) {
              case 1: return ScalarType::Integer;
              case 2: return ScalarType::Real;
              case 3: return ScalarType::Text;
              case 4: return ScalarType::Boolean;
              default: return std::nullopt;
            }
          } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, Expr::Column>) {
            return resolve_column(n.ref, scope, ctx);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            auto t = infer(*n.operand, scope, ctx);
            if (n.op == UnaryOp::Not) {
              if (t && *t != ScalarType::Boolean)
                diag("type-mismatch", "NOT requires a boolean operand", snippet(e));
              return ScalarType::Boolean;
            }
            if (t && !numeric_type(*t))
              diag("type-mismatch", "unary minus requires a numeric operand", snippet(e));
            return t;
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            auto lt = infer(*n.lhs, scope, ctx);
            auto rt = infer(*n.rhs, scope, ctx);
            switch (n.op) {
              case BinaryOp::And:
              case BinaryOp::Or:
                if ((lt && *lt != ScalarType::Boolean) || (rt && *rt != ScalarType::Boolean))
                  diag("type-mismatch", "AND/OR require boolean operands", snippet(e));
                return ScalarType::Boolean;
              case BinaryOp::Eq:
              case BinaryOp::Ne:
              case BinaryOp::Lt:
              case BinaryOp::Le:
              case BinaryOp::Gt:
              case BinaryOp::Ge:
                if (!comparable(lt, rt))
                  diag("type-mismatch", "comparison operands are not comparable", snippet(e));
                return ScalarType::Boolean;
              default: {
                if ((lt && !numeric_type(*lt)) || (rt && !numeric_type(*rt)))
                  diag("type-mismatch", "arithmetic requires numeric operands", snippet(e));
                if (lt && rt && *lt == ScalarType::Integer && *rt == ScalarType::Integer)
                  return ScalarType::Integer;
                return ScalarType::Real;
              }
            }
          } else if constexpr (std::is_same_v<T, Expr::Between>) {
            auto st = infer(*n.subject, scope, ctx);
            auto lo = infer(*n.low, scope, ctx);
            auto hi = infer(*n.high, scope, ctx);
            if (!comparable(st, lo) || !comparable(st, hi))
              diag("type-mismatch", "BETWEEN bounds are not comparable to the subject",
                   snippet(e));
            return ScalarType::Boolean;
          } else if constexpr (std::is_same_v<T, Expr::InList>) {
            auto st = infer(*n.subject, scope, ctx);
            for (const auto& it : n.items) {
              auto t = infer(*it, scope, ctx);
              if (!comparable(st, t))
                diag("type-mismatch", "IN list item type does not match the subject",
                     snippet(e));
            }
            return ScalarType::Boolean;
          } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
            auto st = infer(*n.subject, scope, ctx);
            auto cols = check_select(*n.subquery, false, ctx + " subquery");
            if (cols.size() != 1)
              diag("subquery-column-count", "IN subquery must produce exactly one column", ctx);
            else if (!comparable(st, cols[0].second))
              diag("type-mismatch", "IN subquery column type does not match the subject",
                   snippet(e));
            return ScalarType::Boolean;
          } else if constexpr (std::is_same_v<T, Expr::Like>) {
            auto st = infer(*n.subject, scope, ctx);
            auto pt = infer(*n.pattern, scope, ctx);
            if ((st && *st != ScalarType::Text) || (pt && *pt != ScalarType::Text))
              diag("type-mismatch", "LIKE requires text operands", snippet(e));
            return ScalarType::Boolean;
          } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
            infer(*n.subject, scope, ctx);
            return ScalarType::Boolean;
          } else {
            static_assert(std::is_same_v<T, Expr::Aggregate>);
            if (n.arg && contains_aggregate(*n.arg))
              diag("nested-aggregate", "aggregates cannot be nested", snippet(e));
            MaybeType at = n.arg ? infer(*n.arg, scope, ctx) : std::nullopt;
            switch (n.func) {
              case AggFunc::Count: return ScalarType::Integer;
              case AggFunc::Avg:
                if (at && !numeric_type(*at))
                  diag("type-mismatch", "AVG requires a numeric argument", snippet(e));
                return ScalarType::Real;
              case AggFunc::Sum:
                if (at && !numeric_type(*at))
                  diag("type-mismatch", "SUM requires a numeric argument", snippet(e));
                return at.value_or(ScalarType::Real);
              default: return at;
            }
          }
        },
        e.node);
  }

  const HybridSchema& schema_;
  std::vector<Diagnostic>& out_;
  std::map<std::string, CteInfo> ctes_;
};

}  // namespace

std::vector<Diagnostic> validate_query(const VectorSqlQuery& query, const HybridSchema& schema) {
  std::vector<Diagnostic> out;
  Checker(schema, out).check_query(query);
  return out;
}

}  // namespace vecsql
