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

#include "vecsql/json.hpp"

namespace vecsql {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw JsonFormatError(msg); }

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field: ") + name);
  return *it;
}

std::string str_field(const Json& j, const char* name) {
  const Json& f = field(j, name);
  if (!f.is_string()) bad(std::string("field must be a string: ") + name);
  return f.get<std::string>();
}

}  // namespace

Json value_to_json(const Value& v) {
  switch (v.index()) {
    case 0: return nullptr;
    case 1: return std::get<std::int64_t>(v);
    case 2: return std::get<double>(v);
    case 3: return std::get<std::string>(v);
    case 4: return std::get<bool>(v);
  }
  return nullptr;
}

Value value_from_json(const Json& j) {
  if (j.is_null()) return Value{};
  if (j.is_boolean()) return Value{j.get<bool>()};
  if (j.is_number_integer()) return Value{j.get<std::int64_t>()};
  if (j.is_number_float()) return Value{j.get<double>()};
  if (j.is_string()) return Value{j.get<std::string>()};
  bad("value must be null, boolean, number or string");
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (double c : v.components()) arr.push_back(c);
  return arr;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) bad("vector must be an array");
  std::vector<double> comps;
  comps.reserve(j.size());
  for (const auto& c : j) {
    if (!c.is_number()) bad("vector components must be numbers");
    comps.push_back(c.get<double>());
  }
  return Vector(std::move(comps));
}

Json schema_to_json(const HybridSchema& s) {
  Json tables = Json::array();
  for (const auto& t : s.tables) {
    Json cols = Json::array();
    for (const auto& c : t.columns)
      cols.push_back({{"name", c.name}, {"type", to_string(c.type)}});
    Json vcols = Json::array();
    for (const auto& v : t.vector_columns) {
      vcols.push_back({{"name", v.name},
                       {"dim", v.dim},
                       {"metric", to_string(v.metric)},
                       {"source_column", v.source_column},
                       {"embedder", v.embedder_id}});
    }
    tables.push_back({{"name", t.name},
                      {"primary_key", t.primary_key},
                      {"columns", cols},
                      {"vector_columns", vcols}});
  }
  return Json{{"tables", tables}};
}

HybridSchema schema_from_json(const Json& j) {
  HybridSchema s;
  for (const auto& tj : field(j, "tables")) {
    TableDef t;
    t.name = str_field(tj, "name");
    t.primary_key = str_field(tj, "primary_key");
    for (const auto& cj : field(tj, "columns")) {
      ColumnDef c;
      c.name = str_field(cj, "name");
      auto ty = scalar_type_from_string(str_field(cj, "type"));
      if (!ty) bad("unknown scalar type in schema");
      c.type = *ty;
      t.columns.push_back(std::move(c));
    }
    for (const auto& vj : field(tj, "vector_columns")) {
      VectorColumnDef v;
      v.name = str_field(vj, "name");
      v.dim = field(vj, "dim").get<std::size_t>();
      auto m = metric_from_string(str_field(vj, "metric"));
      if (!m) bad("unknown metric in schema");
      v.metric = *m;
      v.source_column = str_field(vj, "source_column");
      v.embedder_id = str_field(vj, "embedder");
      t.vector_columns.push_back(std::move(v));
    }
    s.tables.push_back(std::move(t));
  }
  return s;
}

namespace {

Json column_ref_to_json(const ColumnRef& c) {
  Json j{{"column", c.column}};
  if (!c.table.empty()) j["table"] = c.table;
  return j;
}

ColumnRef column_ref_from_json(const Json& j) {
  ColumnRef c;
  c.column = str_field(j, "column");
  if (j.contains("table")) c.table = j["table"].get<std::string>();
  return c;
}

const char* binary_op_name(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "or";
    case BinaryOp::And: return "and";
    case BinaryOp::Eq: return "eq";
    case BinaryOp::Ne: return "ne";
    case BinaryOp::Lt: return "lt";
    case BinaryOp::Le: return "le";
    case BinaryOp::Gt: return "gt";
    case BinaryOp::Ge: return "ge";
    case BinaryOp::Add: return "add";
    case BinaryOp::Sub: return "sub";
    case BinaryOp::Mul: return "mul";
    case BinaryOp::Div: return "div";
    case BinaryOp::Mod: return "mod";
  }
  return "?";
}

BinaryOp binary_op_from_name(const std::string& s) {
  static const std::pair<const char*, BinaryOp> table[] = {
      {"or", BinaryOp::Or},   {"and", BinaryOp::And}, {"eq", BinaryOp::Eq},
      {"ne", BinaryOp::Ne},   {"lt", BinaryOp::Lt},   {"le", BinaryOp::Le},
      {"gt", BinaryOp::Gt},   {"ge", BinaryOp::Ge},   {"add", BinaryOp::Add},
      {"sub", BinaryOp::Sub}, {"mul", BinaryOp::Mul}, {"div", BinaryOp::Div},
      {"mod", BinaryOp::Mod}};
  for (const auto& [name, op] : table)
    if (s == name) return op;
  bad("unknown binary op: " + s);
}

const char* agg_name(AggFunc f) {
  switch (f) {
    case AggFunc::Count: return "count";
    case AggFunc::Sum: return "sum";
    case AggFunc::Avg: return "avg";
    case AggFunc::Min: return "min";
    case AggFunc::Max: return "max";
  }
  return "?";
}

AggFunc agg_from_name(const std::string& s) {
  if (s == "count") return AggFunc::Count;
  if (s == "sum") return AggFunc::Sum;
  if (s == "avg") return AggFunc::Avg;
  if (s == "min") return AggFunc::Min;
  if (s == "max") return AggFunc::Max;
  bad("unknown aggregate: " + s);
}

}  // namespace

Json expr_to_json(const Expr& e) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return Json{{"kind", "literal"}, {"value", value_to_json(n.value)},
                      {"real", std::holds_alternative<double>(n.value)}};
        } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
          return Json{{"kind", "placeholder"}, {"index", n.index}};
        } else if constexpr (std::is_same_v<T, Expr::Column>) {
          return Json{{"kind", "column"}, {"ref", column_ref_to_json(n.ref)}};
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return Json{{"kind", "unary"},
                      {"op", n.op == UnaryOp::Not ? "not" : "neg"},
                      {"operand", expr_to_json(*n.operand)}};
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return Json{{"kind", "binary"},
                      {"op", binary_op_name(n.op)},
                      {"lhs", expr_to_json(*n.lhs)},
                      {"rhs", expr_to_json(*n.rhs)}};
        } else if constexpr (std::is_same_v<T, Expr::Between>) {
          return Json{{"kind", "between"},
                      {"subject", expr_to_json(*n.subject)},
                      {"low", expr_to_json(*n.low)},
                      {"high", expr_to_json(*n.high)},
                      {"negated", n.negated}};
        } else if constexpr (std::is_same_v<T, Expr::InList>) {
          Json items = Json::array();
          for (const auto& it : n.items) items.push_back(expr_to_json(*it));
          return Json{{"kind", "in_list"},
                      {"subject", expr_to_json(*n.subject)},
                      {"items", items},
                      {"negated", n.negated}};
        } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
          return Json{{"kind", "in_subquery"},
                      {"subject", expr_to_json(*n.subject)},
                      {"subquery", select_to_json(*n.subquery)},
                      {"negated", n.negated}};
        } else if constexpr (std::is_same_v<T, Expr::Like>) {
          return Json{{"kind", "like"},
                      {"subject", expr_to_json(*n.subject)},
                      {"pattern", expr_to_json(*n.pattern)},
                      {"negated", n.negated}};
        } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
          return Json{{"kind", "is_null"},
                      {"subject", expr_to_json(*n.subject)},
                      {"negated", n.negated}};
        } else {
          static_assert(std::is_same_v<T, Expr::Aggregate>);
          Json j{{"kind", "aggregate"}, {"func", agg_name(n.func)}};
          if (n.arg) j["arg"] = expr_to_json(*n.arg);
          return j;
        }
      },
      e.node);
}

ExprPtr expr_from_json(const Json& j) {
  const std::string kind = str_field(j, "kind");
  auto e = std::make_unique<Expr>();
  if (kind == "literal") {
    Value v = value_from_json(field(j, "value"));
    // integral JSON numbers that were doubles in the AST round back to double
    if (j.value("real", false) && std::holds_alternative<std::int64_t>(v))
      v = Value{static_cast<double>(std::get<std::int64_t>(v))};
    e->node = Expr::Literal{std::move(v)};
  } else if (kind == "placeholder") {
    e->node = Expr::Placeholder{field(j, "index").get<int>()};
  } else if (kind == "column") {
    e->node = Expr::Column{column_ref_from_json(field(j, "ref"))};
  } else if (kind == "unary") {
    e->node = Expr::Unary{str_field(j, "op") == "not" ? UnaryOp::Not : UnaryOp::Neg,
                          expr_from_json(field(j, "operand"))};
  } else if (kind == "binary") {
    e->node = Expr::Binary{binary_op_from_name(str_field(j, "op")),
                           expr_from_json(field(j, "lhs")), expr_from_json(field(j, "rhs"))};
  } else if (kind == "between") {
    e->node = Expr::Between{expr_from_json(field(j, "subject")), expr_from_json(field(j, "low")),
                            expr_from_json(field(j, "high")), field(j, "negated").get<bool>()};
  } else if (kind == "in_list") {
    Expr::InList l;
    l.subject = expr_from_json(field(j, "subject"));
    for (const auto& it : field(j, "items")) l.items.push_back(expr_from_json(it));
    l.negated = field(j, "negated").get<bool>();
    e->node = std::move(l);
  } else if (kind == "in_subquery") {
    e->node = Expr::InSubquery{expr_from_json(field(j, "subject")),
                               select_from_json(field(j, "subquery")),
                               field(j, "negated").get<bool>()};
  } else if (kind == "like") {
    e->node = Expr::Like{expr_from_json(field(j, "subject")),
                         expr_from_json(field(j, "pattern")), field(j, "negated").get<bool>()};
  } else if (kind == "is_null") {
    e->node =
        Expr::IsNull{expr_from_json(field(j, "subject")), field(j, "negated").get<bool>()};
  } else if (kind == "aggregate") {
    Expr::Aggregate a;
    a.func = agg_from_name(str_field(j, "func"));
    if (j.contains("arg")) a.arg = expr_from_json(j["arg"]);
    e->node = std::move(a);
  } else {
    bad("unknown expr kind: " + kind);
  }
  return e;
}

namespace {

Json vector_clause_to_json(const VectorClause& vc) {
  Json j{{"column", column_ref_to_json(vc.column)}, {"k", vc.k}};
  if (vc.is_embed())
    j["embed"] = vc.embed_text();
  else if (vc.is_literal())
    j["vector"] = vector_to_json(vc.literal());
  else if (const auto* es = std::get_if<EmbedSlot>(&vc.query))
    j["embed_slot"] = es->index;
  else
    j["vector_slot"] = std::get<VectorSlot>(vc.query).index;
  if (vc.metric) j["metric"] = to_string(*vc.metric);
  return j;
}

VectorClause vector_clause_from_json(const Json& j) {
  VectorClause vc;
  vc.column = column_ref_from_json(field(j, "column"));
  vc.k = field(j, "k").get<std::uint64_t>();
  if (j.contains("embed"))
    vc.query = j["embed"].get<std::string>();
  else if (j.contains("vector"))
    vc.query = vector_from_json(j["vector"]);
  else if (j.contains("embed_slot"))
    vc.query = EmbedSlot{j["embed_slot"].get<int>()};
  else if (j.contains("vector_slot"))
    vc.query = VectorSlot{j["vector_slot"].get<int>()};
  else
    bad("vector clause needs embed, vector, embed_slot or vector_slot");
  if (j.contains("metric")) {
    auto m = metric_from_string(j["metric"].get<std::string>());
    if (!m) bad("unknown metric in vector clause");
    vc.metric = *m;
  }
  return vc;
}

Json table_ref_to_json(const TableRef& t) {
  Json j{{"table", t.table}};
  if (!t.alias.empty()) j["alias"] = t.alias;
  return j;
}

TableRef table_ref_from_json(const Json& j) {
  TableRef t;
  t.table = str_field(j, "table");
  if (j.contains("alias")) t.alias = j["alias"].get<std::string>();
  return t;
}

}  // namespace

Json select_to_json(const SelectStmt& s) {
  Json j;
  j["select_star"] = s.select_star;
  Json items = Json::array();
  for (const auto& it : s.items) {
    Json ij{{"expr", expr_to_json(*it.expr)}};
    if (!it.alias.empty()) ij["alias"] = it.alias;
    items.push_back(std::move(ij));
  }
  j["items"] = items;
  j["from"] = table_ref_to_json(s.from);
  Json joins = Json::array();
  for (const auto& jn : s.joins) {
    joins.push_back({{"type", jn.type == JoinType::Inner ? "inner" : "left"},
                     {"table", table_ref_to_json(jn.table)},
                     {"on", expr_to_json(*jn.condition)}});
  }
  j["joins"] = joins;
  if (s.where) j["where"] = expr_to_json(*s.where);
  Json gb = Json::array();
  for (const auto& g : s.group_by) gb.push_back(expr_to_json(*g));
  j["group_by"] = gb;
  if (s.having) j["having"] = expr_to_json(*s.having);
  if (s.vector_clause) j["vector_clause"] = vector_clause_to_json(*s.vector_clause);
  Json ob = Json::array();
  for (const auto& o : s.order_by)
    ob.push_back({{"expr", expr_to_json(*o.expr)}, {"desc", o.descending}});
  j["order_by"] = ob;
  if (s.limit) j["limit"] = *s.limit;
  return j;
}

SelectPtr select_from_json(const Json& j) {
  auto s = std::make_unique<SelectStmt>();
  s->select_star = field(j, "select_star").get<bool>();
  for (const auto& ij : field(j, "items")) {
    SelectItem item;
    item.expr = expr_from_json(field(ij, "expr"));
    if (ij.contains("alias")) item.alias = ij["alias"].get<std::string>();
    s->items.push_back(std::move(item));
  }
  s->from = table_ref_from_json(field(j, "from"));
  for (const auto& jj : field(j, "joins")) {
    JoinClause jc;
    jc.type = str_field(jj, "type") == "left" ? JoinType::Left : JoinType::Inner;
    jc.table = table_ref_from_json(field(jj, "table"));
    jc.condition = expr_from_json(field(jj, "on"));
    s->joins.push_back(std::move(jc));
  }
  if (j.contains("where")) s->where = expr_from_json(j["where"]);
  for (const auto& g : field(j, "group_by")) s->group_by.push_back(expr_from_json(g));
  if (j.contains("having")) s->having = expr_from_json(j["having"]);
  if (j.contains("vector_clause"))
    s->vector_clause = vector_clause_from_json(j["vector_clause"]);
  for (const auto& o : field(j, "order_by")) {
    OrderItem item;
    item.expr = expr_from_json(field(o, "expr"));
    item.descending = field(o, "desc").get<bool>();
    s->order_by.push_back(std::move(item));
  }
  if (j.contains("limit")) s->limit = j["limit"].get<std::uint64_t>();
  return s;
}

Json query_to_json(const VectorSqlQuery& q) {
  Json ctes = Json::array();
  for (const auto& c : q.ctes)
    ctes.push_back({{"name", c.name}, {"select", select_to_json(*c.select)}});
  return Json{{"ctes", ctes}, {"select", select_to_json(*q.select)}};
}

VectorSqlQuery query_from_json(const Json& j) {
  VectorSqlQuery q;
  for (const auto& c : field(j, "ctes"))
    q.ctes.push_back({str_field(c, "name"), select_from_json(field(c, "select"))});
  q.select = select_from_json(field(j, "select"));
  return q;
}

Json result_set_to_json(const ResultSet& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json vals = Json::array();
    for (const auto& v : row.values) vals.push_back(value_to_json(v));
    Json rj{{"id", row.id}, {"values", vals}};
    if (row.distance) rj["distance"] = *row.distance;
    rows.push_back(std::move(rj));
  }
  return Json{{"columns", r.columns}, {"rows", rows}, {"truncated", r.truncated}};
}

ResultSet result_set_from_json(const Json& j) {
  ResultSet r;
  for (const auto& c : field(j, "columns")) r.columns.push_back(c.get<std::string>());
  for (const auto& rj : field(j, "rows")) {
    ResultRow row;
    row.id = field(rj, "id").get<RowId>();
    for (const auto& v : field(rj, "values")) row.values.push_back(value_from_json(v));
    if (rj.contains("distance")) row.distance = rj["distance"].get<double>();
    r.rows.push_back(std::move(row));
  }
  r.truncated = field(j, "truncated").get<bool>();
  return r;
}

Json label_to_json(const ComplexityLabel& l) {
  return Json{{"structural", to_string(l.structural)},
              {"integration", to_string(l.integration)},
              {"intent", to_string(l.intent)}};
}

ComplexityLabel label_from_json(const Json& j) {
  ComplexityLabel l;
  auto s = structural_tier_from_string(str_field(j, "structural"));
  auto i = integration_from_string(str_field(j, "integration"));
  auto t = intent_from_string(str_field(j, "intent"));
  if (!s || !i || !t) bad("invalid complexity label");
  l.structural = *s;
  l.integration = *i;
  l.intent = *t;
  return l;
}

Json sample_to_json(const BenchmarkSample& s) {
  return Json{{"id", s.id},
              {"question", s.question},
              {"vectorsql", s.vectorsql},
              {"golden", result_set_to_json(s.golden)},
              {"label", label_to_json(s.label)},
              {"keywords", s.keywords},
              {"reference_k", s.reference_k}};
}

BenchmarkSample sample_from_json(const Json& j) {
  BenchmarkSample s;
  s.id = str_field(j, "id");
  s.question = str_field(j, "question");
  s.vectorsql = str_field(j, "vectorsql");
  s.golden = result_set_from_json(field(j, "golden"));
  s.label = label_from_json(field(j, "label"));
  for (const auto& k : field(j, "keywords")) s.keywords.push_back(k.get<std::string>());
  s.reference_k = field(j, "reference_k").get<std::uint64_t>();
  return s;
}

}  // namespace vecsql
