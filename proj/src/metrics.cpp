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

#include "vecsql/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace vecsql::metrics {

SetScores set_scores(const std::vector<RowId>& pred, const std::vector<RowId>& gold) {
  if (gold.empty()) throw std::invalid_argument("gold result set must be non-empty");
  const std::unordered_set<RowId> pred_set(pred.begin(), pred.end());
  const std::unordered_set<RowId> gold_set(gold.begin(), gold.end());
  std::size_t hit = 0;
  for (RowId id : pred_set)
    if (gold_set.count(id)) ++hit;
  SetScores s;
  s.precision = pred_set.empty() ? 0.0 : static_cast<double>(hit) / pred_set.size();
  s.recall = static_cast<double>(hit) / gold_set.size();
  s.f1 = (s.precision + s.recall) == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double ndcg_at_k(const std::vector<RowId>& pred, const std::vector<RowId>& gold, std::size_t k) {
  if (k < 1) throw std::invalid_argument("ndcg_at_k requires k >= 1");
  if (pred.empty()) return 0.0;
  const std::unordered_set<RowId> gold_set(gold.begin(), gold.end());
  double dcg = 0.0;
  const std::size_t n = std::min(k, pred.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (gold_set.count(pred[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, gold_set.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

std::vector<std::pair<RowId, double>> rrf_fuse_scored(
    const std::vector<std::vector<RowId>>& rankings, double c) {
  if (rankings.empty()) throw std::invalid_argument("rrf_fuse requires at least one ranking");
  if (!(c > 0.0)) throw std::invalid_argument("rrf_fuse requires c > 0");
  std::unordered_map<RowId, double> score;
  for (const auto& ranking : rankings) {
    std::unordered_set<RowId> seen;
    std::size_t rank = 0;
    for (RowId id : ranking) {
      ++rank;
      if (!seen.insert(id).second) continue;
      score[id] += 1.0 / (c + static_cast<double>(rank));
    }
  }
  std::vector<std::pair<RowId, double>> items(score.begin(), score.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return items;
}

std::vector<RowId> rrf_fuse(const std::vector<std::vector<RowId>>& rankings, double c) {
  std::vector<RowId> out;
  for (const auto& [id, s] : rrf_fuse_scored(rankings, c)) out.push_back(id);
  return out;
}

// ---- acc_sql canonicalization ---------------------------------------------

namespace {

struct NameMaps {
  std::map<std::string, std::string> aliases;  // alias -> table (or cte canonical name)
  std::map<std::string, std::string> ctes;     // cte name -> cte<N>
};

std::string mapped_table(const NameMaps& maps, const std::string& name) {
  if (auto it = maps.ctes.find(name); it != maps.ctes.end()) return it->second;
  return name;
}

std::string norm_ref(const ColumnRef& ref, const NameMaps& maps) {
  if (ref.table.empty()) return ref.column;
  std::string t = ref.table;
  if (auto it = maps.aliases.find(t); it != maps.aliases.end()) t = it->second;
  t = mapped_table(maps, t);
  return t + "." + ref.column;
}

std::string norm_value(const Value& v) {
  switch (v.index()) {
    case 0: return "NULL";
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: {
      // numeric canonical form: integral reals compare equal to integers
      const double d = std::get<double>(v);
      if (d == std::floor(d) && std::abs(d) < 1e15)
        return std::to_string(static_cast<std::int64_t>(d));
      return std::to_string(d);
    }
    case 3: return "'" + std::get<std::string>(v) + "'";
    case 4: return std::get<bool>(v) ? "TRUE" : "FALSE";
  }
  return "NULL";
}

std::string canon_select(const SelectStmt& s, const NameMaps& outer_maps);

std::string norm_expr(const Expr& e, const NameMaps& maps) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return norm_value(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
          return "?" + std::to_string(n.index);
        } else if constexpr (std::is_same_v<T, Expr::Column>) {
          return norm_ref(n.ref, maps);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return (n.op == UnaryOp::Not ? "NOT(" : "NEG(") + norm_expr(*n.operand, maps) + ")";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          BinaryOp op = n.op;
          std::string a = norm_expr(*n.lhs, maps);
          std::string b = norm_expr(*n.rhs, maps);
          // flatten + sort commutative chains
          if (op == BinaryOp::And || op == BinaryOp::Or) {
            std::vector<std::string> parts;
            std::function<void(const Expr&)> flatten = [&](const Expr& x) {
              const auto* bx = std::get_if<Expr::Binary>(&x.node);
              if (bx && bx->op == op) {
                flatten(*bx->lhs);
                flatten(*bx->rhs);
              } else {
                parts.push_back(norm_expr(x, maps));
              }
            };
            flatten(e);
            std::sort(parts.begin(), parts.end());
            std::string out = op == BinaryOp::And ? "AND(" : "OR(";
            for (std::size_t i = 0; i < parts.size(); ++i) {
              if (i) out += ",";
              out += parts[i];
            }
            return out + ")";
          }
          // direction-normalize: a > b ==> b < a ; a >= b ==> b <= a
          if (op == BinaryOp::Gt || op == BinaryOp::Ge) {
            std::swap(a, b);
            op = op == BinaryOp::Gt ? BinaryOp::Lt : BinaryOp::Le;
          }
          // symmetric comparisons: operand order by string
          if ((op == BinaryOp::Eq || op == BinaryOp::Ne) && b < a) std::swap(a, b);
          return vecsql::to_string(op) + "(" + a + "," + b + ")";
        } else if constexpr (std::is_same_v<T, Expr::Between>) {
          return std::string(n.negated ? "NOTBETWEEN(" : "BETWEEN(") +
                 norm_expr(*n.subject, maps) + "," + norm_expr(*n.low, maps) + "," +
                 norm_expr(*n.high, maps) + ")";
        } else if constexpr (std::is_same_v<T, Expr::InList>) {
          std::vector<std::string> items;
          for (const auto& it : n.items) items.push_back(norm_expr(*it, maps));
          std::sort(items.begin(), items.end());
          std::string out = std::string(n.negated ? "NOTIN(" : "IN(") +
                            norm_expr(*n.subject, maps) + ";";
          for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += ",";
            out += items[i];
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
          return std::string(n.negated ? "NOTIN(" : "IN(") + norm_expr(*n.subject, maps) + ";" +
                 canon_select(*n.subquery, maps) + ")";
        } else if constexpr (std::is_same_v<T, Expr::Like>) {
          return std::string(n.negated ? "NOTLIKE(" : "LIKE(") + norm_expr(*n.subject, maps) +
                 "," + norm_expr(*n.pattern, maps) + ")";
        } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
          return std::string(n.negated ? "ISNOTNULL(" : "ISNULL(") +
                 norm_expr(*n.subject, maps) + ")";
        } else {
          static_assert(std::is_same_v<T, Expr::Aggregate>);
          if (!n.arg) return "COUNT(*)";
          return vecsql::to_string(n.func) + "(" + norm_expr(*n.arg, maps) + ")";
        }
      },
      e.node);
}

std::string canon_select(const SelectStmt& s, const NameMaps& outer_maps) {
  NameMaps maps = outer_maps;  // CTE renames carry in; aliases are per level
  maps.aliases.clear();
  if (!s.from.alias.empty()) maps.aliases[s.from.alias] = s.from.table;
  for (const auto& j : s.joins)
    if (!j.table.alias.empty()) maps.aliases[j.table.alias] = j.table.table;

  std::string out = "FROM{" + mapped_table(maps, s.from.table) + "}";

  std::vector<std::string> joins;
  for (const auto& j : s.joins) {
    joins.push_back(std::string(j.type == JoinType::Inner ? "inner|" : "left|") +
                    mapped_table(maps, j.table.table) + "|" +
                    (j.condition ? norm_expr(*j.condition, maps) : ""));
  }
  std::sort(joins.begin(), joins.end());
  out += "JOIN{";
  for (std::size_t i = 0; i < joins.size(); ++i) {
    if (i) out += ";";
    out += joins[i];
  }
  out += "}";

  std::vector<std::string> items;
  if (s.select_star) {
    items.push_back("*");
  } else {
    for (const auto& it : s.items) items.push_back(norm_expr(*it.expr, maps));
  }
  std::sort(items.begin(), items.end());
  out += "SELECT{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ";";
    out += items[i];
  }
  out += "}";

  out += "WHERE{" + (s.where ? norm_expr(*s.where, maps) : "") + "}";

  std::vector<std::string> groups;
  for (const auto& g : s.group_by) groups.push_back(norm_expr(*g, maps));
  std::sort(groups.begin(), groups.end());
  out += "GROUPBY{";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) out += ";";
    out += groups[i];
  }
  out += "}";
  out += "HAVING{" + (s.having ? norm_expr(*s.having, maps) : "") + "}";

  // non-vector ORDER BY is order-sensitive; the vector clause is excluded
  out += "ORDERBY{";
  for (std::size_t i = 0; i < s.order_by.size(); ++i) {
    if (i) out += ";";
    out += norm_expr(*s.order_by[i].expr, maps);
    out += s.order_by[i].descending ? "|desc" : "|asc";
  }
  out += "}";
  return out;
}

std::string canon_query(const VectorSqlQuery& q) {
  NameMaps maps;
  for (std::size_t i = 0; i < q.ctes.size(); ++i)
    maps.ctes[q.ctes[i].name] = "cte" + std::to_string(i);
  std::string out;
  for (const auto& cte : q.ctes)
    out += maps.ctes[cte.name] + "[" + canon_select(*cte.select, maps) + "]";
  out += canon_select(*q.select, maps);
  return out;
}

}  // namespace

int acc_sql(const VectorSqlQuery& pred, const VectorSqlQuery& gold) {
  return canon_query(pred) == canon_query(gold) ? 1 : 0;
}

double acc_vec(const VectorSqlQuery& pred_query, const std::vector<ColumnRef>& gold_columns,
               const std::vector<std::string>& pred_keywords,
               const std::vector<std::string>& gold_keywords, const Embedder& embedder) {
  if (gold_keywords.empty())
    throw std::invalid_argument("acc_vec requires non-empty gold keywords");

  // vector-column choice is a hard gate; compare by column name, which is
  // unique per schema in this dialect
  std::multiset<std::string> pred_cols;
  for (const VectorClause* vc : collect_vector_clauses(pred_query))
    pred_cols.insert(vc->column.column);
  std::multiset<std::string> gold_cols;
  for (const auto& ref : gold_columns) gold_cols.insert(ref.column);
  if (pred_cols != gold_cols) return 0.0;

  if (pred_keywords.empty()) return 0.0;

  std::vector<Vector> pv, gv;
  for (const auto& t : pred_keywords) pv.push_back(embedder.embed(t));
  for (const auto& t : gold_keywords) gv.push_back(embedder.embed(t));

  auto cos_sim = [](const Vector& a, const Vector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  };

  // greedy best-match without replacement
  const std::size_t pairs = std::min(pv.size(), gv.size());
  std::vector<bool> used_p(pv.size(), false), used_g(gv.size(), false);
  double total = 0.0;
  for (std::size_t n = 0; n < pairs; ++n) {
    double best = -2.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (used_p[i]) continue;
      for (std::size_t j = 0; j < gv.size(); ++j) {
        if (used_g[j]) continue;
        const double s = cos_sim(pv[i], gv[j]);
        if (s > best) {
          best = s;
          bi = i;
          bj = j;
        }
      }
    }
    used_p[bi] = true;
    used_g[bj] = true;
    total += std::clamp(best, 0.0, 1.0);
  }
  return total / static_cast<double>(pairs);
}

Json score_report_to_json(const ScoreReport& r) {
  return Json{{"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"ndcg_at_k", r.ndcg_at_k},
              {"acc_sql", r.acc_sql},
              {"acc_vec", r.acc_vec},
              {"execution_success", r.execution_success}};
}

ScoreReport score_report_from_json(const Json& j) {
  ScoreReport r;
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.ndcg_at_k = j.at("ndcg_at_k").get<double>();
  r.acc_sql = j.at("acc_sql").get<int>();
  r.acc_vec = j.at("acc_vec").get<double>();
  r.execution_success = j.at("execution_success").get<bool>();
  return r;
}

std::string score_report_csv_header() {
  return "precision,recall,f1,ndcg_at_k,acc_sql,acc_vec,execution_success";
}

namespace {
std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}
}  // namespace

std::string score_report_csv_row(const ScoreReport& r) {
  return fixed6(r.precision) + "," + fixed6(r.recall) + "," + fixed6(r.f1) + "," +
         fixed6(r.ndcg_at_k) + "," + std::to_string(r.acc_sql) + "," + fixed6(r.acc_vec) + "," +
         (r.execution_success ? "1" : "0");
}

}  // namespace vecsql::metrics
