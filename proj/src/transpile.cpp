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

#include "vecsql/transpile.hpp"

#include <charconv>

namespace vecsql::sql {

std::string to_string(Dialect d) {
  switch (d) {
    case Dialect::Canonical: return "canonical";
    case Dialect::SqliteVec: return "sqlite-vec";
    case Dialect::Pgvector: return "pgvector";
    case Dialect::ClickHouse: return "clickhouse";
  }
  return "?";
}

std::optional<Dialect> dialect_from_string(const std::string& s) {
  if (s == "canonical") return Dialect::Canonical;
  if (s == "sqlite-vec" || s == "sqlitevec" || s == "sqlite") return Dialect::SqliteVec;
  if (s == "pgvector" || s == "postgres" || s == "postgresql") return Dialect::Pgvector;
  if (s == "clickhouse") return Dialect::ClickHouse;
  return std::nullopt;
}

namespace {

std::string format_real(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
    s += ".0";
  return s;
}

std::string quote_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out.push_back(c);
  }
  out += "'";
  return out;
}

// Backend vector literals use compact comma separation: [0.1,0.2].
std::string vector_body(const Vector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ",";
    out += format_real(v[i]);
  }
  return out + "]";
}

// Canonical form keeps the read-friendly ", " separator used by the parser
// round-trip fixtures.
std::string canonical_vector_body(const Vector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ", ";
    out += format_real(v[i]);
  }
  return out + "]";
}

int op_precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
  }
  return 8;
}

class DialectWriter {
 public:
  DialectWriter(Dialect dialect, const std::map<std::string, Vector>& embedded,
                const HybridSchema* schema)
      : dialect_(dialect), embedded_(embedded), schema_(schema) {}

  TranspileOutput write(const VectorSqlQuery& q) {
    TranspileOutput out;
    std::string text;
    if (!q.ctes.empty()) {
      text += "WITH ";
      for (std::size_t i = 0; i < q.ctes.size(); ++i) {
        if (i) text += ", ";
        text += q.ctes[i].name + " AS (" + write_select(*q.ctes[i].select) + ")";
      }
      text += " ";
    }
    text += write_select(*q.select);
    out.sql = std::move(text);
    out.placeholders = std::move(placeholders_);
    return out;
  }

 private:
  std::string write_select(const SelectStmt& s) {
    // Resolve the vector clause up front: it contributes a FROM addition in
    // the sqlite-vec form and an ORDER BY head elsewhere.
    std::string knn_alias;
    std::string order_head;
    std::optional<Vector> query_vec;
    if (s.vector_clause) {
      const VectorClause& vc = *s.vector_clause;
      query_vec = resolve_query_vector(vc);
      const Vector& qv = *query_vec;
      const Metric metric = resolve_metric(s, vc);
      switch (dialect_) {
        case Dialect::Canonical: {
          order_head = "DISTANCE(" + column(vc.column) + ", " + canonical_vector_body(qv);
          if (vc.metric) order_head += ", " + quote_string(vecsql::to_string(*vc.metric));
          order_head += ")";
          break;
        }
        case Dialect::Pgvector: {
          const char* op = metric == Metric::L2 ? "<->" : metric == Metric::Cosine ? "<=>" : "<#>";
          order_head = column(vc.column) + " " + op + " " + quote_string(vector_body(qv));
          break;
        }
        case Dialect::ClickHouse: {
          if (metric == Metric::Dot)
            order_head = "dotProduct(" + column(vc.column) + ", " + vector_body(qv) + ") DESC";
          else
            order_head = std::string(metric == Metric::L2 ? "L2Distance" : "cosineDistance") +
                         "(" + column(vc.column) + ", " + vector_body(qv) + ")";
          break;
        }
        case Dialect::SqliteVec: {
          for (const auto& j : s.joins) {
            if (j.type == JoinType::Left)
              throw TranspileError(
                  "sqlite-vec: LEFT JOIN cannot be combined with a vector clause (the vec0 "
                  "MATCH join is inner)");
          }
          knn_alias = "knn" + std::to_string(knn_counter_++);
          order_head = knn_alias + ".distance";
          break;
        }
      }
    }

    std::string out = "SELECT ";
    if (s.select_star) {
      out += "*";
    } else {
      for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ", ";
        out += expr(*s.items[i].expr, 0);
        if (!s.items[i].alias.empty()) out += " AS " + s.items[i].alias;
      }
    }
    if (!s.from.table.empty()) out += " FROM " + table(s.from);
    for (const auto& j : s.joins) {
      out += j.type == JoinType::Inner ? " INNER JOIN " : " LEFT JOIN ";
      out += table(j.table) + " ON " + expr(*j.condition, 0);
    }
    if (!knn_alias.empty()) {
      const VectorClause& vc = *s.vector_clause;
      const auto [base_table, display] = vector_owner(s, vc);
      const std::string vtab = "vec_" + base_table + "_" + vc.column.column;
      out += " JOIN (SELECT rowid, distance FROM " + vtab + " WHERE " + vc.column.column +
             " MATCH " + quote_string(vector_body(*query_vec)) +
             " AND k = " + std::to_string(vc.k) + " ORDER BY distance) AS " + knn_alias +
             " ON " + display + ".rowid = " + knn_alias + ".rowid";
    }
    if (s.where) out += " WHERE " + expr(*s.where, 0);
    if (!s.group_by.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < s.group_by.size(); ++i) {
        if (i) out += ", ";
        out += expr(*s.group_by[i], 0);
      }
      if (s.having) out += " HAVING " + expr(*s.having, 0);
    }
    if (!order_head.empty() || !s.order_by.empty()) {
      out += " ORDER BY ";
      bool first = true;
      if (!order_head.empty()) {
        out += order_head;
        first = false;
      }
      for (const auto& o : s.order_by) {
        if (!first) out += ", ";
        first = false;
        out += expr(*o.expr, 0);
        if (o.descending) out += " DESC";
      }
    }
    if (s.vector_clause) {
      if (dialect_ != Dialect::SqliteVec) out += " LIMIT " + std::to_string(s.vector_clause->k);
    } else if (s.limit) {
      out += " LIMIT " + std::to_string(*s.limit);
    }
    return out;
  }

  Vector resolve_query_vector(const VectorClause& vc) {
    if (vc.is_literal()) return vc.literal();
    if (!vc.is_embed())
      throw TranspileError("templated queries (placeholder payloads) cannot be transpiled");
    auto it = embedded_.find(vc.embed_text());
    if (it == embedded_.end())
      throw TranspileError("no vector provided for EMBED(" + quote_string(vc.embed_text()) + ")");
    placeholders_.push_back({vc.embed_text(), vc.column});
    return it->second;
  }

  Metric resolve_metric(const SelectStmt& s, const VectorClause& vc) const {
    if (vc.metric) return *vc.metric;
    if (schema_) {
      auto check = [&](const TableRef& ref) -> const VectorColumnDef* {
        if (!vc.column.table.empty() && vc.column.table != ref.table &&
            vc.column.table != ref.alias)
          return nullptr;
        const TableDef* t = schema_->find_table(ref.table);
        return t ? t->find_vector_column(vc.column.column) : nullptr;
      };
      if (const auto* d = check(s.from)) return d->metric;
      for (const auto& j : s.joins)
        if (const auto* d = check(j.table)) return d->metric;
    }
    return Metric::L2;
  }

  // The base table owning the vector column and its display name (alias when
  // aliased). Falls back to the FROM table for unqualified references.
  std::pair<std::string, std::string> vector_owner(const SelectStmt& s,
                                                   const VectorClause& vc) const {
    auto display = [](const TableRef& r) { return r.alias.empty() ? r.table : r.alias; };
    if (!vc.column.table.empty()) {
      if (vc.column.table == s.from.table || vc.column.table == s.from.alias)
        return {s.from.table, display(s.from)};
      for (const auto& j : s.joins)
        if (vc.column.table == j.table.table || vc.column.table == j.table.alias)
          return {j.table.table, display(j.table)};
      throw TranspileError("vector column qualifier '" + vc.column.table +
                           "' does not name a FROM table");
    }
    if (schema_) {
      auto owner_of = [&](const TableRef& ref) -> bool {
        const TableDef* t = schema_->find_table(ref.table);
        return t && t->find_vector_column(vc.column.column);
      };
      if (owner_of(s.from)) return {s.from.table, display(s.from)};
      for (const auto& j : s.joins)
        if (owner_of(j.table)) return {j.table.table, display(j.table)};
    }
    return {s.from.table, display(s.from)};
  }

  std::string table(const TableRef& t) {
    return t.alias.empty() ? t.table : t.table + " AS " + t.alias;
  }

  std::string column(const ColumnRef& c) {
    return c.table.empty() ? c.column : c.table + "." + c.column;
  }

  std::string expr(const Expr& e, int min_prec) {
    const int prec = precedence(e);
    std::string body = node(e);
    if (prec < min_prec) return "(" + body + ")";
    return body;
  }

  int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Binary>) return op_precedence(n.op);
          else if constexpr (std::is_same_v<T, Expr::Unary>)
            return n.op == UnaryOp::Not ? 3 : 7;
          else if constexpr (std::is_same_v<T, Expr::Between> ||
                             std::is_same_v<T, Expr::InList> ||
                             std::is_same_v<T, Expr::InSubquery> ||
                             std::is_same_v<T, Expr::Like> || std::is_same_v<T, Expr::IsNull>)
            return 4;
          else
            return 8;
        },
        e.node);
  }

  std::string node(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Literal>) {
            return literal(n.value);
          } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
            throw TranspileError("templated queries (placeholders) cannot be transpiled");
          } else if constexpr (std::is_same_v<T, Expr::Column>) {
            return column(n.ref);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            if (n.op == UnaryOp::Not) return "NOT " + expr(*n.operand, 4);
            return "-" + expr(*n.operand, 8);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            const int p = op_precedence(n.op);
            const int lhs_min = p == 4 ? 5 : p;
            const int rhs_min = p == 4 ? 5 : p + 1;
            std::string lhs = expr(*n.lhs, lhs_min);
            std::string rhs = expr(*n.rhs, rhs_min);
            return lhs + " " + vecsql::to_string(n.op) + " " + rhs;
          } else if constexpr (std::is_same_v<T, Expr::Between>) {
            std::string subject = expr(*n.subject, 5);
            std::string low = expr(*n.low, 5);
            std::string high = expr(*n.high, 5);
            return subject + (n.negated ? " NOT BETWEEN " : " BETWEEN ") + low + " AND " + high;
          } else if constexpr (std::is_same_v<T, Expr::InList>) {
            std::string out = expr(*n.subject, 5) + (n.negated ? " NOT IN (" : " IN (");
            for (std::size_t i = 0; i < n.items.size(); ++i) {
              if (i) out += ", ";
              out += expr(*n.items[i], 0);
            }
            return out + ")";
          } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
            std::string subject = expr(*n.subject, 5);
            std::string sub = write_select(*n.subquery);
            return subject + (n.negated ? " NOT IN (" : " IN (") + sub + ")";
          } else if constexpr (std::is_same_v<T, Expr::Like>) {
            std::string subject = expr(*n.subject, 5);
            std::string pattern = expr(*n.pattern, 5);
            return subject + (n.negated ? " NOT LIKE " : " LIKE ") + pattern;
          } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
            return expr(*n.subject, 5) + (n.negated ? " IS NOT NULL" : " IS NULL");
          } else {
            static_assert(std::is_same_v<T, Expr::Aggregate>);
            if (!n.arg) return "COUNT(*)";
            return vecsql::to_string(n.func) + "(" + expr(*n.arg, 0) + ")";
          }
        },
        e.node);
  }

  std::string literal(const Value& v) {
    switch (v.index()) {
      case 0: return "NULL";
      case 1: return std::to_string(std::get<std::int64_t>(v));
      case 2: return format_real(std::get<double>(v));
      case 3: return quote_string(std::get<std::string>(v));
      case 4: return std::get<bool>(v) ? "TRUE" : "FALSE";
    }
    return "NULL";
  }

  Dialect dialect_;
  const std::map<std::string, Vector>& embedded_;
  const HybridSchema* schema_;
  std::vector<TranspilePlaceholder> placeholders_;
  int knn_counter_ = 0;
};

}  // namespace

TranspileOutput transpile(const VectorSqlQuery& query, Dialect dialect,
                          const std::map<std::string, Vector>& embedded,
                          const HybridSchema* schema) {
  return DialectWriter(dialect, embedded, schema).write(query);
}

}  // namespace vecsql::sql
