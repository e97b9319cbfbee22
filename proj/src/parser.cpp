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

#include "vecsql/parser.hpp"

#include <cctype>
#include <charconv>
#include <unordered_set>

namespace vecsql::sql {

namespace {

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "SELECT", "FROM",  "WHERE",   "GROUP",    "BY",        "HAVING", "ORDER",  "LIMIT",
      "WITH",   "AS",    "ON",      "JOIN",     "INNER",     "LEFT",   "OUTER",  "AND",
      "OR",     "NOT",   "IN",      "BETWEEN",  "LIKE",      "IS",     "NULL",   "TRUE",
      "FALSE",  "ASC",   "DESC",    "DISTANCE", "EMBED",     "COUNT",  "SUM",    "AVG",
      "MIN",    "MAX",   "UNION",   "INTERSECT", "EXCEPT",   "DISTINCT", "OVER", "RECURSIVE",
      "INSERT", "UPDATE", "DELETE"};
  return kw;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += count;
  };

  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < n && text[i + 1] == '-') {  // line comment
      std::size_t j = i;
      while (j < n && text[j] != '\n') ++j;
      advance(j - i);
      continue;
    }
    const int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word = text.substr(i, j - i);
      std::string up = upper(word);
      if (keywords().count(up)) {
        out.push_back({TokenKind::Keyword, up, tl, tc});
      } else {
        out.push_back({TokenKind::Identifier, word, tl, tc});
      }
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool real = false;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < n && text[j] == '.') {
        real = true;
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
          real = true;
          j = k;
          while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      out.push_back({real ? TokenKind::RealLiteral : TokenKind::IntLiteral, text.substr(i, j - i),
                     tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      std::string value;
      std::size_t j = i + 1;
      while (true) {
        if (j >= n) throw ParseError("unterminated string literal", tl, tc);
        if (text[j] == '\'') {
          if (j + 1 < n && text[j + 1] == '\'') {  // escaped quote
            value.push_back('\'');
            j += 2;
            continue;
          }
          ++j;
          break;
        }
        value.push_back(text[j]);
        ++j;
      }
      out.push_back({TokenKind::StringLiteral, value, tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '?') {
      std::size_t j = i + 1;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i + 1) throw ParseError("expected digits after '?'", tl, tc);
      out.push_back({TokenKind::Placeholder, text.substr(i + 1, j - i - 1), tl, tc});
      advance(j - i);
      continue;
    }
    // multi-char operators first
    auto two = (i + 1 < n) ? text.substr(i, 2) : std::string();
    if (two == "<=" || two == ">=" || two == "<>" || two == "!=") {
      out.push_back({TokenKind::Symbol, two == "!=" ? "<>" : two, tl, tc});
      advance(2);
      continue;
    }
    static const std::string singles = "()[],.*/%+-=<>;";
    if (singles.find(c) != std::string::npos) {
      out.push_back({TokenKind::Symbol, std::string(1, c), tl, tc});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({TokenKind::End, "", line, col});
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  VectorSqlQuery parse_statement() {
    VectorSqlQuery q;
    if (peek_kw("INSERT") || peek_kw("UPDATE") || peek_kw("DELETE"))
      throw UnsupportedConstructError("DML statements are not supported", cur().line,
                                      cur().column);
    if (accept_kw("WITH")) {
      if (peek_kw("RECURSIVE"))
        throw UnsupportedConstructError("recursive CTEs are not supported", cur().line,
                                        cur().column);
      do {
        CommonTableExpr cte;
        cte.name = expect_identifier("CTE name");
        expect_kw("AS");
        expect_sym("(");
        cte.select = parse_select();
        expect_sym(")");
        q.ctes.push_back(std::move(cte));
      } while (accept_sym(","));
    }
    q.select = parse_select();
    accept_sym(";");
    if (cur().kind != TokenKind::End)
      throw ParseError("unexpected trailing input '" + cur().text + "'", cur().line, cur().column);
    return q;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }

  bool peek_kw(const char* kw) const {
    return cur().kind == TokenKind::Keyword && cur().text == kw;
  }
  bool accept_kw(const char* kw) {
    if (peek_kw(kw)) {
      next();
      return true;
    }
    return false;
  }
  void expect_kw(const char* kw) {
    if (!accept_kw(kw))
      throw ParseError(std::string("expected ") + kw + ", found '" + describe(cur()) + "'",
                       cur().line, cur().column);
  }
  bool peek_sym(const char* s) const {
    return cur().kind == TokenKind::Symbol && cur().text == s;
  }
  bool accept_sym(const char* s) {
    if (peek_sym(s)) {
      next();
      return true;
    }
    return false;
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s))
      throw ParseError(std::string("expected '") + s + "', found '" + describe(cur()) + "'",
                       cur().line, cur().column);
  }
  std::string expect_identifier(const char* what) {
    if (cur().kind != TokenKind::Identifier)
      throw ParseError(std::string("expected ") + what + ", found '" + describe(cur()) + "'",
                       cur().line, cur().column);
    std::string s = cur().text;
    next();
    return s;
  }

  static std::string describe(const Token& t) {
    return t.kind == TokenKind::End ? "end of input" : t.text;
  }

  void reject_set_op() {
    if (peek_kw("UNION") || peek_kw("INTERSECT") || peek_kw("EXCEPT"))
      throw UnsupportedConstructError("set operations are not supported", cur().line,
                                      cur().column);
  }

  SelectPtr parse_select() {
    expect_kw("SELECT");
    if (peek_kw("DISTINCT"))
      throw UnsupportedConstructError("SELECT DISTINCT is not supported", cur().line,
                                      cur().column);
    auto sel = std::make_unique<SelectStmt>();
    if (accept_sym("*")) {
      sel->select_star = true;
    } else {
      do {
        SelectItem item;
        item.expr = parse_expr();
        if (accept_kw("AS")) item.alias = expect_identifier("alias");
        sel->items.push_back(std::move(item));
      } while (accept_sym(","));
    }
    if (accept_kw("FROM")) {  // FROM is optional: SELECT 1 is legal
      sel->from = parse_table_ref();
      while (true) {
        if (accept_kw("JOIN")) {
          parse_join_tail(*sel, JoinType::Inner);
        } else if (peek_kw("INNER")) {
          next();
          expect_kw("JOIN");
          parse_join_tail(*sel, JoinType::Inner);
        } else if (peek_kw("LEFT")) {
          next();
          accept_kw("OUTER");
          expect_kw("JOIN");
          parse_join_tail(*sel, JoinType::Left);
        } else {
          break;
        }
      }
    }
    if (accept_kw("WHERE")) sel->where = parse_expr();
    if (accept_kw("GROUP")) {
      expect_kw("BY");
      do {
        sel->group_by.push_back(parse_expr());
      } while (accept_sym(","));
      if (accept_kw("HAVING")) sel->having = parse_expr();
    }
    if (accept_kw("ORDER")) {
      expect_kw("BY");
      if (peek_kw("DISTANCE")) {
        sel->vector_clause = parse_vector_order();
        while (accept_sym(",")) sel->order_by.push_back(parse_order_item());
      } else {
        do {
          sel->order_by.push_back(parse_order_item());
        } while (accept_sym(","));
      }
    }
    if (accept_kw("LIMIT")) {
      const Token limit_tok = cur();
      if (cur().kind != TokenKind::IntLiteral)
        throw ParseError("expected integer after LIMIT", cur().line, cur().column);
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), v);
      if (ec != std::errc())
        throw ParseError("LIMIT value out of range", limit_tok.line, limit_tok.column);
      next();
      if (sel->vector_clause)
        sel->vector_clause->k = v;
      else
        sel->limit = v;
    } else if (sel->vector_clause) {
      throw ParseError("vector DISTANCE ordering requires a LIMIT (the top-k count)", cur().line,
                       cur().column);
    }
    reject_set_op();
    return sel;
  }

  void parse_join_tail(SelectStmt& sel, JoinType type) {
    JoinClause j;
    j.type = type;
    j.table = parse_table_ref();
    expect_kw("ON");
    j.condition = parse_expr();
    sel.joins.push_back(std::move(j));
  }

  TableRef parse_table_ref() {
    if (peek_sym("("))
      throw UnsupportedConstructError("derived tables in FROM are not supported; use a CTE",
                                      cur().line, cur().column);
    TableRef t;
    t.table = expect_identifier("table name");
    if (accept_kw("AS")) t.alias = expect_identifier("table alias");
    return t;
  }

  OrderItem parse_order_item() {
    if (peek_kw("DISTANCE"))
      throw ParseError("DISTANCE is only allowed as the first ORDER BY item", cur().line,
                       cur().column);
    OrderItem item;
    item.expr = parse_expr();
    if (accept_kw("DESC"))
      item.descending = true;
    else
      accept_kw("ASC");
    return item;
  }

  VectorClause parse_vector_order() {
    expect_kw("DISTANCE");
    expect_sym("(");
    VectorClause vc;
    vc.column = parse_column_ref();
    expect_sym(",");
    if (accept_kw("EMBED")) {
      expect_sym("(");
      if (cur().kind == TokenKind::StringLiteral) {
        vc.query = cur().text;
        next();
      } else if (cur().kind == TokenKind::Placeholder) {
        vc.query = EmbedSlot{parse_placeholder_index()};
      } else {
        throw ParseError("expected string literal in EMBED()", cur().line, cur().column);
      }
      expect_sym(")");
    } else if (peek_sym("[")) {
      vc.query = parse_vector_literal();
    } else if (cur().kind == TokenKind::Placeholder) {
      vc.query = VectorSlot{parse_placeholder_index()};
    } else {
      throw ParseError("expected EMBED('...') or a vector literal in DISTANCE()", cur().line,
                       cur().column);
    }
    if (accept_sym(",")) {
      if (cur().kind != TokenKind::StringLiteral)
        throw ParseError("expected metric name string in DISTANCE()", cur().line, cur().column);
      auto m = metric_from_string(cur().text);
      if (!m)
        throw ParseError("unknown metric '" + cur().text + "' (expected l2, cosine or dot)",
                         cur().line, cur().column);
      vc.metric = *m;
      next();
    }
    expect_sym(")");
    accept_kw("ASC");  // distance order is ascending; DESC is not meaningful
    if (peek_kw("DESC"))
      throw UnsupportedConstructError("descending DISTANCE ordering is not supported", cur().line,
                                      cur().column);
    return vc;
  }

  int parse_placeholder_index() {
    int v = 0;
    auto [p, ec] = std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), v);
    if (ec != std::errc())
      throw ParseError("placeholder index out of range", cur().line, cur().column);
    next();
    return v;
  }

  Vector parse_vector_literal() {
    expect_sym("[");
    std::vector<double> comps;
    if (!peek_sym("]")) {
      do {
        comps.push_back(parse_signed_number());
      } while (accept_sym(","));
    }
    expect_sym("]");
    return Vector(std::move(comps));
  }

  double parse_signed_number() {
    bool neg = accept_sym("-");
    if (cur().kind != TokenKind::IntLiteral && cur().kind != TokenKind::RealLiteral)
      throw ParseError("expected number in vector literal", cur().line, cur().column);
    double v = std::strtod(cur().text.c_str(), nullptr);
    next();
    return neg ? -v : v;
  }

  ColumnRef parse_column_ref() {
    ColumnRef ref;
    std::string first = expect_identifier("column name");
    if (accept_sym(".")) {
      ref.table = std::move(first);
      ref.column = expect_identifier("column name");
    } else {
      ref.column = std::move(first);
    }
    return ref;
  }

  // expression grammar: OR < AND < NOT < predicate < additive < multiplicative < unary
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_kw("OR")) lhs = make_binary(BinaryOp::Or, std::move(lhs), parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept_kw("AND")) lhs = make_binary(BinaryOp::And, std::move(lhs), parse_not());
    return lhs;
  }

  ExprPtr parse_not() {
    if (accept_kw("NOT")) return make_unary(UnaryOp::Not, parse_not());
    return parse_predicate();
  }

  ExprPtr parse_predicate() {
    ExprPtr lhs = parse_additive();
    if (cur().kind == TokenKind::Symbol) {
      static const std::pair<const char*, BinaryOp> cmps[] = {
          {"=", BinaryOp::Eq}, {"<>", BinaryOp::Ne}, {"<=", BinaryOp::Le},
          {">=", BinaryOp::Ge}, {"<", BinaryOp::Lt}, {">", BinaryOp::Gt}};
      for (const auto& [sym, op] : cmps) {
        if (peek_sym(sym)) {
          next();
          return make_binary(op, std::move(lhs), parse_additive());
        }
      }
    }
    bool negated = false;
    if (peek_kw("NOT") && (peek(1).kind == TokenKind::Keyword &&
                           (peek(1).text == "BETWEEN" || peek(1).text == "IN" ||
                            peek(1).text == "LIKE"))) {
      next();
      negated = true;
    }
    if (accept_kw("BETWEEN")) {
      auto e = std::make_unique<Expr>();
      Expr::Between b;
      b.subject = std::move(lhs);
      b.low = parse_additive();
      expect_kw("AND");
      b.high = parse_additive();
      b.negated = negated;
      e->node = std::move(b);
      return e;
    }
    if (accept_kw("IN")) {
      expect_sym("(");
      auto e = std::make_unique<Expr>();
      if (peek_kw("SELECT")) {
        Expr::InSubquery s;
        s.subject = std::move(lhs);
        s.subquery = parse_select();
        s.negated = negated;
        e->node = std::move(s);
      } else {
        Expr::InList l;
        l.subject = std::move(lhs);
        do {
          l.items.push_back(parse_expr());
        } while (accept_sym(","));
        l.negated = negated;
        e->node = std::move(l);
      }
      expect_sym(")");
      return e;
    }
    if (accept_kw("LIKE")) {
      auto e = std::make_unique<Expr>();
      e->node = Expr::Like{std::move(lhs), parse_additive(), negated};
      return e;
    }
    if (negated)
      throw ParseError("expected BETWEEN, IN or LIKE after NOT", cur().line, cur().column);
    if (accept_kw("IS")) {
      const bool is_not = accept_kw("NOT");
      expect_kw("NULL");
      auto e = std::make_unique<Expr>();
      e->node = Expr::IsNull{std::move(lhs), is_not};
      return e;
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (true) {
      if (accept_sym("+"))
        lhs = make_binary(BinaryOp::Add, std::move(lhs), parse_multiplicative());
      else if (accept_sym("-"))
        lhs = make_binary(BinaryOp::Sub, std::move(lhs), parse_multiplicative());
      else
        break;
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (true) {
      if (accept_sym("*"))
        lhs = make_binary(BinaryOp::Mul, std::move(lhs), parse_unary());
      else if (accept_sym("/"))
        lhs = make_binary(BinaryOp::Div, std::move(lhs), parse_unary());
      else if (accept_sym("%"))
        lhs = make_binary(BinaryOp::Mod, std::move(lhs), parse_unary());
      else
        break;
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (accept_sym("-")) return make_unary(UnaryOp::Neg, parse_unary());
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::IntLiteral: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc())
          throw ParseError("integer literal out of range", t.line, t.column);
        next();
        return make_literal(Value{v});
      }
      case TokenKind::RealLiteral: {
        double v = std::strtod(t.text.c_str(), nullptr);
        next();
        return make_literal(Value{v});
      }
      case TokenKind::StringLiteral: {
        std::string s = t.text;
        next();
        return make_literal(Value{std::move(s)});
      }
      case TokenKind::Placeholder: {
        auto e = std::make_unique<Expr>();
        e->node = Expr::Placeholder{parse_placeholder_index()};
        return e;
      }
      case TokenKind::Keyword: {
        if (t.text == "NULL") {
          next();
          return make_literal(Value{});
        }
        if (t.text == "TRUE") {
          next();
          return make_literal(Value{true});
        }
        if (t.text == "FALSE") {
          next();
          return make_literal(Value{false});
        }
        if (t.text == "COUNT") {
          next();
          expect_sym("(");
          ExprPtr arg;
          if (!accept_sym("*")) arg = parse_expr();
          expect_sym(")");
          check_no_over();
          return make_aggregate(AggFunc::Count, std::move(arg));
        }
        if (t.text == "SUM" || t.text == "AVG" || t.text == "MIN" || t.text == "MAX") {
          AggFunc f = t.text == "SUM"   ? AggFunc::Sum
                      : t.text == "AVG" ? AggFunc::Avg
                      : t.text == "MIN" ? AggFunc::Min
                                        : AggFunc::Max;
          next();
          expect_sym("(");
          ExprPtr arg = parse_expr();
          expect_sym(")");
          check_no_over();
          return make_aggregate(f, std::move(arg));
        }
        if (t.text == "DISTANCE")
          throw ParseError("DISTANCE is only allowed as the first ORDER BY item", t.line,
                           t.column);
        if (t.text == "EMBED")
          throw ParseError("EMBED is only allowed inside DISTANCE()", t.line, t.column);
        if (t.text == "INSERT" || t.text == "UPDATE" || t.text == "DELETE")
          throw UnsupportedConstructError("DML statements are not supported", t.line, t.column);
        throw ParseError("unexpected keyword '" + t.text + "'", t.line, t.column);
      }
      case TokenKind::Identifier: {
        auto e = std::make_unique<Expr>();
        e->node = Expr::Column{parse_column_ref()};
        return e;
      }
      case TokenKind::Symbol: {
        if (t.text == "(") {
          next();
          ExprPtr inner = parse_expr();
          expect_sym(")");
          return inner;
        }
        break;
      }
      default:
        break;
    }
    throw ParseError("unexpected token '" + describe(t) + "'", t.line, t.column);
  }

  void check_no_over() {
    if (peek_kw("OVER"))
      throw UnsupportedConstructError("window functions are not supported", cur().line,
                                      cur().column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

VectorSqlQuery parse(const std::string& text) {
  return Parser(tokenize(text)).parse_statement();
}

}  // namespace vecsql::sql
