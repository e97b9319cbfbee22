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

#include "vecsql/render.hpp"

#include <charconv>

namespace vecsql::sql {

namespace {

// Shortest round-trip double; always re-lexes as a real (never an integer).
std::string format_real(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find('E') == std::string::npos && s.find("inf") == std::string::npos &&
      s.find("nan") == std::string::npos)
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

// Operator precedence bands used to decide parenthesization. Mirrors the
// grammar: OR(1) < AND(2) < NOT(3) < predicates(4) < additive(5) <
// multiplicative(6) < unary minus(7) < primary(8).
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

class Renderer {
 public:
  explicit Renderer(bool templating) : templating_(templating) {}

  std::string render(const VectorSqlQuery& q) {
    std::string out;
    if (!q.ctes.empty()) {
      out += "WITH ";
      for (std::size_t i = 0; i < q.ctes.size(); ++i) {
        if (i) out += ", ";
        out += q.ctes[i].name + " AS (" + render_select(*q.ctes[i].select) + ")";
      }
      out += " ";
    }
    out += render_select(*q.select);
    return out;
  }

  std::string render_select(const SelectStmt& s) {
    std::string out = "SELECT ";
    if (s.select_star) {
      out += "*";
    } else {
      for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*s.items[i].expr, 0);
        if (!s.items[i].alias.empty()) out += " AS " + s.items[i].alias;
      }
    }
    if (!s.from.table.empty()) out += " FROM " + render_table(s.from);
    for (const auto& j : s.joins) {
      out += j.type == JoinType::Inner ? " INNER JOIN " : " LEFT JOIN ";
      out += render_table(j.table) + " ON " + render_expr(*j.condition, 0);
    }
    if (s.where) out += " WHERE " + render_expr(*s.where, 0);
    if (!s.group_by.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < s.group_by.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*s.group_by[i], 0);
      }
      if (s.having) out += " HAVING " + render_expr(*s.having, 0);
    }
    if (s.vector_clause || !s.order_by.empty()) {
      out += " ORDER BY ";
      bool first = true;
      if (s.vector_clause) {
        out += render_vector_order(*s.vector_clause);
        first = false;
      }
      for (const auto& o : s.order_by) {
        if (!first) out += ", ";
        first = false;
        out += render_expr(*o.expr, 0);
        if (o.descending) out += " DESC";
      }
    }
    if (s.vector_clause)
      out += " LIMIT " + std::to_string(s.vector_clause->k);
    else if (s.limit)
      out += " LIMIT " + std::to_string(*s.limit);
    return out;
  }

  std::string render_one_expr(const Expr& e) { return render_expr(e, 0); }

 private:
  std::string render_table(const TableRef& t) {
    return t.alias.empty() ? t.table : t.table + " AS " + t.alias;
  }

  std::string render_column(const ColumnRef& c) {
    return c.table.empty() ? c.column : c.table + "." + c.column;
  }

  std::string render_vector_order(const VectorClause& vc) {
    std::string out = "DISTANCE(" + render_column(vc.column) + ", ";
    if (vc.is_embed()) {
      out += "EMBED(" + (templating_ ? placeholder() : quote_string(vc.embed_text())) + ")";
    } else if (vc.is_literal()) {
      out += templating_ ? placeholder() : render_vector(vc.literal());
    } else if (std::holds_alternative<EmbedSlot>(vc.query)) {
      out += "EMBED(" + placeholder() + ")";
    } else {
      out += placeholder();
    }
    if (vc.metric) out += ", " + quote_string(to_string(*vc.metric));
    out += ")";
    return out;
  }

  std::string render_vector(const Vector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.dim(); ++i) {
      if (i) out += ", ";
      out += format_real(v[i]);
    }
    out += "]";
    return out;
  }

  std::string placeholder() { return "?" + std::to_string(++placeholder_counter_); }

  // min_prec: the lowest node precedence the slot accepts without parens.
  std::string render_expr(const Expr& e, int min_prec) {
    const int prec = node_precedence(e);
    std::string body = render_node(e);
    if (prec < min_prec) return "(" + body + ")";
    return body;
  }

  int node_precedence(const Expr& e) {
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

  std::string render_node(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Literal>) {
            return render_literal(n.value);
          } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
            return templating_ ? placeholder() : "?" + std::to_string(n.index);
          } else if constexpr (std::is_same_v<T, Expr::Column>) {
            return render_column(n.ref);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            if (n.op == UnaryOp::Not) return "NOT " + render_expr(*n.operand, 4);
            return "-" + render_expr(*n.operand, 8);  // parens on -(-x): "--" would lex as comment
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            const int p = op_precedence(n.op);
            // comparisons take additive operands; AND/OR are left-assoc chains.
            // Sequenced statements: the template placeholder counter must
            // number left to right (operand order in `+` chains is unspecified).
            const int lhs_min = p == 4 ? 5 : p;
            const int rhs_min = p == 4 ? 5 : p + 1;
            std::string lhs = render_expr(*n.lhs, lhs_min);
            std::string rhs = render_expr(*n.rhs, rhs_min);
            return lhs + " " + to_string(n.op) + " " + rhs;
          } else if constexpr (std::is_same_v<T, Expr::Between>) {
            std::string subject = render_expr(*n.subject, 5);
            std::string low = render_expr(*n.low, 5);
            std::string high = render_expr(*n.high, 5);
            return subject + (n.negated ? " NOT BETWEEN " : " BETWEEN ") + low + " AND " + high;
          } else if constexpr (std::is_same_v<T, Expr::InList>) {
            std::string out = render_expr(*n.subject, 5) + (n.negated ? " NOT IN (" : " IN (");
            for (std::size_t i = 0; i < n.items.size(); ++i) {
              if (i) out += ", ";
              out += render_expr(*n.items[i], 0);
            }
            return out + ")";
          } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
            std::string subject = render_expr(*n.subject, 5);
            std::string sub = render_select(*n.subquery);
            return subject + (n.negated ? " NOT IN (" : " IN (") + sub + ")";
          } else if constexpr (std::is_same_v<T, Expr::Like>) {
            std::string subject = render_expr(*n.subject, 5);
            std::string pattern = render_expr(*n.pattern, 5);
            return subject + (n.negated ? " NOT LIKE " : " LIKE ") + pattern;
          } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
            return render_expr(*n.subject, 5) + (n.negated ? " IS NOT NULL" : " IS NULL");
          } else {
            static_assert(std::is_same_v<T, Expr::Aggregate>);
            if (!n.arg) return "COUNT(*)";
            return to_string(n.func) + "(" + render_expr(*n.arg, 0) + ")";
          }
        },
        e.node);
  }

  std::string render_literal(const Value& v) {
    switch (v.index()) {
      case 0: return "NULL";
      case 1: return templating_ ? placeholder() : std::to_string(std::get<std::int64_t>(v));
      case 2: return templating_ ? placeholder() : format_real(std::get<double>(v));
      case 3: return templating_ ? placeholder() : quote_string(std::get<std::string>(v));
      case 4: return std::get<bool>(v) ? "TRUE" : "FALSE";
    }
    return "NULL";
  }

  bool templating_;
  int placeholder_counter_ = 0;
};

}  // namespace

std::string render_canonical(const VectorSqlQuery& q) { return Renderer(false).render(q); }

std::string render_canonical(const SelectStmt& s) {
  return Renderer(false).render_select(s);
}

std::string render_expr(const Expr& e) { return Renderer(false).render_one_expr(e); }

std::string canonical_template(const VectorSqlQuery& q) { return Renderer(true).render(q); }

}  // namespace vecsql::sql
