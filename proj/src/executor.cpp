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

#include "vecsql/executor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <unordered_map>

#include "vecsql/render.hpp"

namespace vecsql::exec {

ExecStrategy parse_strategy(const std::string& spec) {
  if (spec == "pre") return PreFilter{};
  if (spec == "post") return PostFilter{};
  if (spec.rfind("post:", 0) == 0) {
    const std::string arg = spec.substr(5);
    PostFilter pf;
    if (!arg.empty() && arg[0] == 'x')
      pf.multiplier = std::stod(arg.substr(1));
    else
      pf.k_prime = std::stoull(arg);
    return pf;
  }
  if (spec.rfind("iter:", 0) == 0) {
    const std::string arg = spec.substr(5);
    const auto comma = arg.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("iterative strategy needs iter:<batch>,<maxScans>");
    Iterative it;
    it.batch = std::stoull(arg.substr(0, comma));
    it.max_scans = std::stoull(arg.substr(comma + 1));
    if (it.batch < 1 || it.max_scans < 1)
      throw std::invalid_argument("iterative batch and maxScans must be >= 1");
    return it;
  }
  throw std::invalid_argument("unknown strategy spec: " + spec +
                              " (expected pre, post[:k'|:xM] or iter:batch,max)");
}

std::string strategy_name(const ExecStrategy& s) {
  if (std::holds_alternative<PreFilter>(s)) return "pre";
  if (const auto* pf = std::get_if<PostFilter>(&s)) {
    if (pf->k_prime) return "post:" + std::to_string(*pf->k_prime);
    if (pf->multiplier) {
      std::string m = std::to_string(*pf->multiplier);
      m.erase(m.find_last_not_of('0') + 1);
      if (!m.empty() && m.back() == '.') m.pop_back();
      return "post:x" + m;
    }
    return "post";
  }
  const auto& it = std::get<Iterative>(s);
  return "iter:" + std::to_string(it.batch) + "," + std::to_string(it.max_scans);
}

namespace {

using Clock = std::chrono::steady_clock;

struct EvalRow {
  RowId id = 0;
  std::vector<Value> values;
  std::optional<double> distance;
};

struct EvalTable {
  std::vector<std::string> columns;
  std::vector<EvalRow> rows;
  bool truncated = false;
};

struct Source {
  std::string display;
  const TableData* base = nullptr;
  const EvalTable* derived = nullptr;

  std::size_t row_count() const { return base ? base->rows.size() : derived->rows.size(); }
  std::size_t column_count() const {
    return base ? base->def.columns.size() : derived->columns.size();
  }
  const std::string& column_name(std::size_t i) const {
    return base ? base->def.columns[i].name : derived->columns[i];
  }
  int column_index(const std::string& name) const {
    const std::size_t n = column_count();
    for (std::size_t i = 0; i < n; ++i)
      if (column_name(i) == name) return static_cast<int>(i);
    return -1;
  }
  const Value& value(int row, int col) const {
    return base ? base->rows[row].scalars[col] : derived->rows[row].values[col];
  }
  RowId row_id(int row) const { return base ? base->rows[row].id : derived->rows[row].id; }
};

// One joined row: a row index per source; -1 marks the NULL side of an
// unmatched LEFT JOIN.
using Combo = std::vector<int>;

Value null_value() { return Value{}; }

bool as_bool_true(const Value& v) {
  return std::holds_alternative<bool>(v) && std::get<bool>(v);
}

bool value_is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

double to_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

// SQL LIKE with % and _ wildcards (no escape character), case-sensitive.
bool like_match(const std::string& s, const std::string& p) {
  std::size_t si = 0, pi = 0;
  std::size_t star_p = std::string::npos, star_s = 0;
  while (si < s.size()) {
    if (pi < p.size() && (p[pi] == '_' || p[pi] == s[si])) {
      ++si;
      ++pi;
    } else if (pi < p.size() && p[pi] == '%') {
      star_p = pi++;
      star_s = si;
    } else if (star_p != std::string::npos) {
      pi = star_p + 1;
      si = ++star_s;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '%') ++pi;
  return pi == p.size();
}

// Hashable composite key with numeric-type-insensitive equality, used for
// join probes and GROUP BY buckets.
struct ValueKey {
  std::vector<Value> parts;

  bool operator==(const ValueKey& other) const {
    if (parts.size() != other.parts.size()) return false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Value& a = parts[i];
      const Value& b = other.parts[i];
      if (is_null(a) || is_null(b)) {
        if (!(is_null(a) && is_null(b))) return false;  // group semantics: NULLs bucket together
      } else if (!value_equal(a, b)) {
        return false;
      }
    }
    return true;
  }
};

struct ValueKeyHash {
  std::size_t operator()(const ValueKey& k) const {
    std::size_t h = 1469598103u;
    for (const Value& v : k.parts) {
      std::size_t p = 0;
      if (is_null(v))
        p = 0x9E37u;
      else if (value_is_numeric(v))
        p = std::hash<double>{}(to_double(v));
      else if (const auto* s = std::get_if<std::string>(&v))
        p = std::hash<std::string>{}(*s);
      else
        p = std::get<bool>(v) ? 3 : 5;
      h = h * 1099511628211ull ^ p;
    }
    return h;
  }
};

struct VectorItems {
  std::vector<RowId> ids;       // parallel to the level's combos
  std::vector<double> dists;
};

class Evaluator {
 public:
  Evaluator(const HybridStore& store, ExecStrategy strategy, const Embedder* embedder,
            const ExecOptions& options)
      : store_(store),
        strategy_(std::move(strategy)),
        embedder_(embedder ? embedder : store.embedder().get()),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(options.timeout_seconds))) {}

  EvalTable eval_query(const VectorSqlQuery& q) {
    for (const auto& cte : q.ctes) {
      if (env_.count(cte.name)) throw ExecError("duplicate CTE name: " + cte.name);
      env_.emplace(cte.name, eval_select(*cte.select));
    }
    return eval_select(*q.select);
  }

 private:
  void check_deadline() {
    if (++tick_ % 1024 == 0 && Clock::now() > deadline_)
      throw TimeoutError("execution exceeded the wall-clock budget");
  }

  // ---- scope -------------------------------------------------------------

  std::vector<Source> bind_sources(const SelectStmt& s, bool& consumed_truncated) {
    std::vector<Source> scope;
    auto add = [&](const TableRef& ref) {
      if (ref.table.empty()) return;
      Source src;
      src.display = ref.alias.empty() ? ref.table : ref.alias;
      if (auto it = env_.find(ref.table); it != env_.end()) {
        src.derived = &it->second;
        consumed_truncated = consumed_truncated || it->second.truncated;
      } else if (const TableData* t = store_.table(ref.table)) {
        src.base = t;
      } else {
        throw ExecError("unknown table: " + ref.table);
      }
      scope.push_back(std::move(src));
    };
    add(s.from);
    for (const auto& j : s.joins) add(j.table);
    return scope;
  }

  std::pair<int, int> resolve_column(const std::vector<Source>& scope,
                                     const ColumnRef& ref) const {
    int src = -1, col = -1;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (!ref.table.empty() && ref.table != scope[i].display) continue;
      const int c = scope[i].column_index(ref.column);
      if (c >= 0) {
        if (src >= 0) throw ExecError("ambiguous column: " + ref.column);
        src = static_cast<int>(i);
        col = c;
      }
    }
    if (src < 0)
      throw ExecError("unknown column: " +
                      (ref.table.empty() ? ref.column : ref.table + "." + ref.column));
    return {src, col};
  }

  // ---- expression evaluation ---------------------------------------------

  struct GroupView {
    const std::vector<Combo>* members = nullptr;
    const std::vector<ExprPtr>* group_exprs = nullptr;
    const std::vector<Value>* key_values = nullptr;
  };

  Value eval(const Expr& e, const std::vector<Source>& scope, const Combo& combo,
             const GroupView* group = nullptr) {
    if (group) {
      for (std::size_t i = 0; i < group->group_exprs->size(); ++i)
        if (expr_equal(e, *(*group->group_exprs)[i])) return (*group->key_values)[i];
      if (const auto* agg = std::get_if<Expr::Aggregate>(&e.node))
        return eval_aggregate(*agg, scope, *group->members);
    }
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Expr::Literal>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, Expr::Placeholder>) {
            throw ExecError("template placeholders cannot be evaluated");
          } else if constexpr (std::is_same_v<T, Expr::Column>) {
            if (group)
              throw ExecError("column '" + n.ref.column + "' used outside GROUP BY");
            const auto [src, col] = resolve_column(scope, n.ref);
            const int row = combo[src];
            if (row < 0) return null_value();  // NULL side of a left join
            return scope[src].value(row, col);
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            Value v = eval(*n.operand, scope, combo, group);
            if (is_null(v)) return v;
            if (n.op == UnaryOp::Not) {
              if (!std::holds_alternative<bool>(v)) throw ExecError("NOT needs a boolean");
              return Value{!std::get<bool>(v)};
            }
            if (const auto* i = std::get_if<std::int64_t>(&v)) return Value{-*i};
            if (const auto* d = std::get_if<double>(&v)) return Value{-*d};
            throw ExecError("unary minus needs a number");
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            return eval_binary(n, scope, combo, group);
          } else if constexpr (std::is_same_v<T, Expr::Between>) {
            Value subj = eval(*n.subject, scope, combo, group);
            Value lo = eval(*n.low, scope, combo, group);
            Value hi = eval(*n.high, scope, combo, group);
            Value ge = compare(subj, lo, BinaryOp::Ge);
            Value le = compare(subj, hi, BinaryOp::Le);
            Value both = logical_and(ge, le);
            return n.negated ? logical_not(both) : both;
          } else if constexpr (std::is_same_v<T, Expr::InList>) {
            Value subj = eval(*n.subject, scope, combo, group);
            bool unknown = is_null(subj);
            bool hit = false;
            for (const auto& item : n.items) {
              Value v = eval(*item, scope, combo, group);
              if (is_null(v)) {
                unknown = true;
              } else if (!is_null(subj) && value_equal(subj, v)) {
                hit = true;
                break;
              }
            }
            Value r = hit ? Value{true} : (unknown ? null_value() : Value{false});
            return n.negated ? logical_not(r) : r;
          } else if constexpr (std::is_same_v<T, Expr::InSubquery>) {
            Value subj = eval(*n.subject, scope, combo, group);
            const SubqueryResult& sub = subquery(*n.subquery);
            bool hit = false;
            if (!is_null(subj)) {
              for (const Value& v : sub.values) {
                if (!is_null(v) && value_equal(subj, v)) {
                  hit = true;
                  break;
                }
              }
            }
            Value r = hit ? Value{true}
                          : ((is_null(subj) || sub.has_null) ? null_value() : Value{false});
            return n.negated ? logical_not(r) : r;
          } else if constexpr (std::is_same_v<T, Expr::Like>) {
            Value subj = eval(*n.subject, scope, combo, group);
            Value pat = eval(*n.pattern, scope, combo, group);
            if (is_null(subj) || is_null(pat)) return null_value();
            const auto* s = std::get_if<std::string>(&subj);
            const auto* p = std::get_if<std::string>(&pat);
            if (!s || !p) throw ExecError("LIKE needs text operands");
            const bool m = like_match(*s, *p);
            return Value{n.negated ? !m : m};
          } else if constexpr (std::is_same_v<T, Expr::IsNull>) {
            Value subj = eval(*n.subject, scope, combo, group);
            const bool v = is_null(subj);
            return Value{n.negated ? !v : v};
          } else {
            static_assert(std::is_same_v<T, Expr::Aggregate>);
            throw ExecError("aggregate used in a scalar context");
          }
        },
        e.node);
  }

  static Value logical_not(const Value& v) {
    if (is_null(v)) return v;
    return Value{!std::get<bool>(v)};
  }

  static Value logical_and(const Value& a, const Value& b) {
    // three-valued logic: FALSE dominates NULL
    const bool fa = !is_null(a) && !std::get<bool>(a);
    const bool fb = !is_null(b) && !std::get<bool>(b);
    if (fa || fb) return Value{false};
    if (is_null(a) || is_null(b)) return null_value();
    return Value{true};
  }

  static Value logical_or(const Value& a, const Value& b) {
    const bool ta = !is_null(a) && std::get<bool>(a);
    const bool tb = !is_null(b) && std::get<bool>(b);
    if (ta || tb) return Value{true};
    if (is_null(a) || is_null(b)) return null_value();
    return Value{false};
  }

  static Value compare(const Value& a, const Value& b, BinaryOp op) {
    if (is_null(a) || is_null(b)) return null_value();
    int c;
    if (value_is_numeric(a) && value_is_numeric(b)) {
      const double x = to_double(a), y = to_double(b);
      c = x < y ? -1 : (x > y ? 1 : 0);
    } else if (a.index() == b.index()) {
      c = value_compare(a, b);
    } else {
      throw ExecError("comparison between incompatible types");
    }
    switch (op) {
      case BinaryOp::Eq: return Value{c == 0};
      case BinaryOp::Ne: return Value{c != 0};
      case BinaryOp::Lt: return Value{c < 0};
      case BinaryOp::Le: return Value{c <= 0};
      case BinaryOp::Gt: return Value{c > 0};
      case BinaryOp::Ge: return Value{c >= 0};
      default: throw ExecError("not a comparison");
    }
  }

  Value eval_binary(const Expr::Binary& n, const std::vector<Source>& scope, const Combo& combo,
                    const GroupView* group) {
    if (n.op == BinaryOp::And)
      return logical_and(eval(*n.lhs, scope, combo, group), eval(*n.rhs, scope, combo, group));
    if (n.op == BinaryOp::Or)
      return logical_or(eval(*n.lhs, scope, combo, group), eval(*n.rhs, scope, combo, group));

    Value a = eval(*n.lhs, scope, combo, group);
    Value b = eval(*n.rhs, scope, combo, group);
    switch (n.op) {
      case BinaryOp::Eq:
      case BinaryOp::Ne:
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        return compare(a, b, n.op);
      default: break;
    }
    if (is_null(a) || is_null(b)) return null_value();
    if (!value_is_numeric(a) || !value_is_numeric(b))
      throw ExecError("arithmetic needs numeric operands");
    const bool both_int =
        std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b);
    if (both_int) {
      const std::int64_t x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
      switch (n.op) {
        case BinaryOp::Add: return Value{x + y};
        case BinaryOp::Sub: return Value{x - y};
        case BinaryOp::Mul: return Value{x * y};
        case BinaryOp::Div: return y == 0 ? null_value() : Value{x / y};
        case BinaryOp::Mod: return y == 0 ? null_value() : Value{x % y};
        default: break;
      }
    } else {
      const double x = to_double(a), y = to_double(b);
      switch (n.op) {
        case BinaryOp::Add: return Value{x + y};
        case BinaryOp::Sub: return Value{x - y};
        case BinaryOp::Mul: return Value{x * y};
        case BinaryOp::Div: return y == 0.0 ? null_value() : Value{x / y};
        case BinaryOp::Mod: return y == 0.0 ? null_value() : Value{std::fmod(x, y)};
        default: break;
      }
    }
    throw ExecError("unknown arithmetic operator");
  }

  Value eval_aggregate(const Expr::Aggregate& agg, const std::vector<Source>& scope,
                       const std::vector<Combo>& members) {
    if (agg.func == AggFunc::Count && !agg.arg)
      return Value{static_cast<std::int64_t>(members.size())};

    std::int64_t count = 0;
    std::int64_t isum = 0;
    double dsum = 0.0;
    bool any_real = false;
    std::optional<Value> best;
    for (const Combo& m : members) {
      Value v = eval(*agg.arg, scope, m, nullptr);
      if (is_null(v)) continue;
      ++count;
      switch (agg.func) {
        case AggFunc::Count: break;
        case AggFunc::Sum:
        case AggFunc::Avg:
          if (!value_is_numeric(v)) throw ExecError("SUM/AVG need numeric values");
          if (std::holds_alternative<double>(v)) any_real = true;
          dsum += to_double(v);
          if (const auto* i = std::get_if<std::int64_t>(&v)) isum += *i;
          break;
        case AggFunc::Min:
          if (!best || value_compare(v, *best) < 0) best = v;
          break;
        case AggFunc::Max:
          if (!best || value_compare(v, *best) > 0) best = v;
          break;
      }
    }
    switch (agg.func) {
      case AggFunc::Count: return Value{count};
      case AggFunc::Sum:
        if (count == 0) return null_value();
        return any_real ? Value{dsum} : Value{isum};
      case AggFunc::Avg:
        if (count == 0) return null_value();
        return Value{dsum / static_cast<double>(count)};
      default:
        return best ? *best : null_value();
    }
  }

  // ---- subqueries ----------------------------------------------------------

  struct SubqueryResult {
    std::vector<Value> values;
    bool has_null = false;
    bool truncated = false;
  };

  const SubqueryResult& subquery(const SelectStmt& s) {
    auto it = subquery_cache_.find(&s);
    if (it != subquery_cache_.end()) return it->second;
    EvalTable t = eval_select(s);
    if (t.columns.size() != 1)
      throw ExecError("IN subquery must produce exactly one column");
    SubqueryResult r;
    r.truncated = t.truncated;
    r.values.reserve(t.rows.size());
    for (const auto& row : t.rows) {
      r.values.push_back(row.values[0]);
      r.has_null = r.has_null || is_null(row.values[0]);
    }
    return subquery_cache_.emplace(&s, std::move(r)).first->second;
  }

  // ---- join pipeline -------------------------------------------------------

  struct JoinKeys {
    std::vector<std::pair<int, int>> probe;  // (source, column) on the prior side
    std::vector<std::pair<int, int>> build;  // columns on the newly joined side
  };

  JoinKeys split_join_keys(const Expr& cond, const std::vector<Source>& scope,
                           std::size_t new_idx) {
    JoinKeys keys;
    collect_join_keys(cond, scope, new_idx, keys);
    if (keys.probe.empty()) throw ExecError("join condition has no usable equality");
    return keys;
  }

  void collect_join_keys(const Expr& cond, const std::vector<Source>& scope, std::size_t new_idx,
                         JoinKeys& keys) {
    const auto* b = std::get_if<Expr::Binary>(&cond.node);
    if (!b) throw ExecError("join conditions must be conjunctions of column equalities");
    if (b->op == BinaryOp::And) {
      collect_join_keys(*b->lhs, scope, new_idx, keys);
      collect_join_keys(*b->rhs, scope, new_idx, keys);
      return;
    }
    if (b->op != BinaryOp::Eq)
      throw ExecError("join conditions must be conjunctions of column equalities");
    const auto* lc = std::get_if<Expr::Column>(&b->lhs->node);
    const auto* rc = std::get_if<Expr::Column>(&b->rhs->node);
    if (!lc || !rc) throw ExecError("join keys must be plain columns");
    const auto l = resolve_column(scope, lc->ref);
    const auto r = resolve_column(scope, rc->ref);
    if (l.first == static_cast<int>(new_idx) && r.first != static_cast<int>(new_idx)) {
      keys.build.push_back(l);
      keys.probe.push_back(r);
    } else if (r.first == static_cast<int>(new_idx) && l.first != static_cast<int>(new_idx)) {
      keys.build.push_back(r);
      keys.probe.push_back(l);
    } else {
      throw ExecError("join equality must relate the joined table to a prior table");
    }
  }

  std::vector<Combo> build_combos(const SelectStmt& s, const std::vector<Source>& scope) {
    std::vector<Combo> combos;
    if (scope.empty()) {
      combos.push_back(Combo{});  // FROM-less SELECT evaluates over one empty row
    } else {
      combos.reserve(scope[0].row_count());
      for (std::size_t r = 0; r < scope[0].row_count(); ++r)
        combos.push_back(Combo{static_cast<int>(r)});
    }

    for (std::size_t j = 0; j < s.joins.size(); ++j) {
      const std::size_t new_idx = j + 1;
      const JoinKeys keys = split_join_keys(*s.joins[j].condition, scope, new_idx);
      // hash build over the joined source
      std::unordered_map<ValueKey, std::vector<int>, ValueKeyHash> table;
      const Source& src = scope[new_idx];
      for (std::size_t r = 0; r < src.row_count(); ++r) {
        ValueKey key;
        bool usable = true;
        for (const auto& [si, ci] : keys.build) {
          (void)si;
          const Value& v = src.value(static_cast<int>(r), ci);
          if (is_null(v)) {
            usable = false;  // NULL keys never join
            break;
          }
          key.parts.push_back(v);
        }
        if (usable) table[key].push_back(static_cast<int>(r));
        check_deadline();
      }

      std::vector<Combo> next;
      for (const Combo& combo : combos) {
        check_deadline();
        ValueKey key;
        bool usable = true;
        for (const auto& [si, ci] : keys.probe) {
          const int row = combo[si];
          if (row < 0) {
            usable = false;
            break;
          }
          const Value& v = scope[si].value(row, ci);
          if (is_null(v)) {
            usable = false;
            break;
          }
          key.parts.push_back(v);
        }
        const std::vector<int>* matches = nullptr;
        if (usable) {
          auto it = table.find(key);
          if (it != table.end()) matches = &it->second;
        }
        if (matches) {
          for (int m : *matches) {
            Combo c = combo;
            c.push_back(m);
            next.push_back(std::move(c));
          }
        } else if (s.joins[j].type == JoinType::Left) {
          Combo c = combo;
          c.push_back(-1);
          next.push_back(std::move(c));
        }
      }
      combos = std::move(next);
    }

    if (s.where) {
      std::vector<Combo> kept;
      kept.reserve(combos.size());
      for (Combo& c : combos) {
        check_deadline();
        if (as_bool_true(eval(*s.where, scope, c))) kept.push_back(std::move(c));
      }
      combos = std::move(kept);
    }
    return combos;
  }

  // ---- level evaluation ----------------------------------------------------

  EvalTable eval_select(const SelectStmt& s) {
    bool consumed_truncated = false;
    const std::vector<Source> scope = bind_sources(s, consumed_truncated);

    std::vector<Combo> combos;
    std::optional<VectorItems> vitems;
    bool truncated = false;
    if (s.vector_clause) {
      std::tie(combos, vitems, truncated) = eval_vector_selection(s, scope);
    } else {
      combos = build_combos(s, scope);
    }
    EvalTable out = finish_level(s, scope, std::move(combos),
                                 vitems ? &*vitems : nullptr);
    out.truncated = out.truncated || truncated || consumed_truncated;
    return out;
  }

  std::tuple<std::vector<Combo>, std::optional<VectorItems>, bool> eval_vector_selection(
      const SelectStmt& s, const std::vector<Source>& scope) {
    const VectorClause& vc = *s.vector_clause;

    // the base table owning the vector column
    int owner_idx = -1;
    int vec_idx = -1;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (!scope[i].base) continue;
      if (!vc.column.table.empty() && vc.column.table != scope[i].display) continue;
      const int vi = scope[i].base->vector_column_index(vc.column.column);
      if (vi >= 0) {
        if (owner_idx >= 0) throw ExecError("ambiguous vector column: " + vc.column.column);
        owner_idx = static_cast<int>(i);
        vec_idx = vi;
      }
    }
    if (owner_idx < 0) throw ExecError("unknown vector column: " + vc.column.column);
    const TableData& owner = *scope[owner_idx].base;
    const VectorColumnDef& vdef = owner.def.vector_columns[vec_idx];
    if (vc.metric && *vc.metric != vdef.metric)
      throw ExecError("explicit metric conflicts with the column metric");
    if (vc.k < 1) throw ExecError("k must be >= 1");

    Vector query_vec = [&] {
      if (vc.is_literal()) return vc.literal();
      if (!vc.is_embed()) throw ExecError("templated vector clauses cannot be executed");
      if (!embedder_) throw ExecError("no embedder available to resolve EMBED()");
      return embedder_->embed(vc.embed_text());
    }();
    if (query_vec.dim() != vdef.dim)
      throw ExecError("query vector dim " + std::to_string(query_vec.dim()) +
                      " does not match column dim " + std::to_string(vdef.dim));

    // Candidate items: owner rows with at least one surviving join combination.
    // The first surviving combination (construction order) represents the item.
    std::vector<Combo> filtered = build_combos(s, scope);
    std::unordered_map<RowId, Combo> first_combo;
    std::vector<RowId> satisfying_ids;
    for (Combo& c : filtered) {
      const int row = c[owner_idx];
      if (row < 0) continue;
      const RowId id = owner.rows[row].id;
      if (first_combo.emplace(id, c).second) satisfying_ids.push_back(id);
    }
    std::sort(satisfying_ids.begin(), satisfying_ids.end());

    const ann::VectorStore& exact = owner.exact[vec_idx];
    const ann::AnnIndex& index = owner.indexes[vec_idx];
    const std::uint64_t k = vc.k;

    std::vector<ann::Neighbor> items;
    bool truncated = false;

    if (std::holds_alternative<PreFilter>(strategy_)) {
      items = ann::knn_exact(exact, query_vec, k, &satisfying_ids);
    } else if (const auto* post = std::get_if<PostFilter>(&strategy_)) {
      const std::uint64_t k_prime = post->resolve_k_prime(k);
      const std::size_t ef = std::max<std::size_t>(index.params().ef_search, k_prime);
      auto candidates = index.search(query_vec, k_prime, ef);
      for (const auto& cand : candidates) {
        if (items.size() >= k) break;
        if (first_combo.count(cand.id)) items.push_back(cand);
      }
      truncated = items.size() < k && candidates.size() == k_prime;
    } else {
      const auto& iter = std::get<Iterative>(strategy_);
      std::unordered_map<RowId, double> pool;
      std::size_t seen_cap = 0;
      for (std::uint64_t scan = 1; scan <= iter.max_scans; ++scan) {
        check_deadline();
        std::uint64_t budget = k + iter.batch * (scan - 1);
        budget = std::min<std::uint64_t>(budget, index.size());
        seen_cap = budget;
        const std::size_t ef = std::max<std::size_t>(index.params().ef_search, budget);
        for (const auto& cand : index.search(query_vec, budget, ef))
          pool.emplace(cand.id, cand.distance);
        std::size_t found = 0;
        for (const auto& [id, d] : pool)
          if (first_combo.count(id)) ++found;
        if (found >= k || budget >= index.size()) break;
      }
      std::vector<ann::Neighbor> satisfying;
      for (const auto& [id, d] : pool)
        if (first_combo.count(id)) satisfying.push_back({id, d});
      std::sort(satisfying.begin(), satisfying.end(), [](const auto& a, const auto& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.id < b.id;
      });
      if (satisfying.size() > k) satisfying.resize(k);
      items = std::move(satisfying);
      truncated = items.size() < k && seen_cap < index.size();
    }

    std::vector<Combo> combos;
    VectorItems vi;
    combos.reserve(items.size());
    for (const auto& item : items) {
      combos.push_back(first_combo.at(item.id));
      vi.ids.push_back(item.id);
      vi.dists.push_back(item.distance);
    }
    return {std::move(combos), std::move(vi), truncated};
  }

  // Projection, grouping, ordering and row-id assignment shared by the plain
  // and vector paths.
  EvalTable finish_level(const SelectStmt& s, const std::vector<Source>& scope,
                         std::vector<Combo> combos, const VectorItems* vitems) {
    EvalTable out;

    // column names
    if (s.select_star) {
      for (const auto& src : scope)
        for (std::size_t c = 0; c < src.column_count(); ++c)
          out.columns.push_back(src.column_name(c));
    } else {
      for (const auto& it : s.items) {
        if (!it.alias.empty())
          out.columns.push_back(it.alias);
        else if (const auto* col = std::get_if<Expr::Column>(&it.expr->node))
          out.columns.push_back(col->ref.column);
        else
          out.columns.push_back(sql::render_expr(*it.expr));
      }
    }

    bool any_agg = s.having && contains_aggregate(*s.having);
    for (const auto& it : s.items) any_agg = any_agg || contains_aggregate(*it.expr);
    for (const auto& o : s.order_by) any_agg = any_agg || contains_aggregate(*o.expr);
    const bool grouped = !s.group_by.empty() || any_agg;

    struct OutRow {
      EvalRow row;
      std::vector<Value> order_keys;
      double distance_key = 0.0;
      bool has_distance = false;
      std::size_t seq = 0;
    };
    std::vector<OutRow> staged;

    if (grouped) {
      // bucket combos by group key (first-seen order)
      std::unordered_map<ValueKey, std::size_t, ValueKeyHash> bucket_of;
      struct Group {
        std::vector<Value> keys;
        std::vector<Combo> members;
        std::vector<std::size_t> member_seq;
      };
      std::vector<Group> groups;
      if (s.group_by.empty()) {
        groups.emplace_back();  // single implicit group (even when empty)
        for (std::size_t i = 0; i < combos.size(); ++i) {
          groups[0].members.push_back(combos[i]);
          groups[0].member_seq.push_back(i);
        }
      } else {
        for (std::size_t i = 0; i < combos.size(); ++i) {
          check_deadline();
          ValueKey key;
          std::vector<Value> keyvals;
          for (const auto& g : s.group_by) {
            keyvals.push_back(eval(*g, scope, combos[i]));
            key.parts.push_back(keyvals.back());
          }
          auto [it, inserted] = bucket_of.emplace(key, groups.size());
          if (inserted) {
            groups.emplace_back();
            groups.back().keys = std::move(keyvals);
          }
          groups[it->second].members.push_back(combos[i]);
          groups[it->second].member_seq.push_back(i);
        }
      }

      std::size_t seq = 0;
      for (auto& g : groups) {
        check_deadline();
        GroupView view{&g.members, &s.group_by, &g.keys};
        const Combo empty_combo(scope.size(), -1);
        const Combo& repr = g.members.empty() ? empty_combo : g.members.front();
        if (s.having && !as_bool_true(eval(*s.having, scope, repr, &view))) {
          ++seq;
          continue;
        }
        OutRow o;
        o.seq = seq++;
        for (const auto& it : s.items)
          o.row.values.push_back(eval(*it.expr, scope, repr, &view));
        if (vitems && !g.member_seq.empty()) {
          double best = vitems->dists[g.member_seq[0]];
          for (std::size_t m : g.member_seq) best = std::min(best, vitems->dists[m]);
          o.row.distance = best;
          o.distance_key = best;
          o.has_distance = true;
        }
        for (const auto& ob : s.order_by)
          o.order_keys.push_back(eval(*order_sort_target(ob, s), scope, repr, &view));
        staged.push_back(std::move(o));
      }
    } else {
      for (std::size_t i = 0; i < combos.size(); ++i) {
        check_deadline();
        OutRow o;
        o.seq = i;
        const Combo& c = combos[i];
        if (s.select_star) {
          for (std::size_t si = 0; si < scope.size(); ++si) {
            for (std::size_t ci = 0; ci < scope[si].column_count(); ++ci) {
              o.row.values.push_back(c[si] < 0 ? null_value()
                                               : scope[si].value(c[si], static_cast<int>(ci)));
            }
          }
        } else {
          for (const auto& it : s.items) o.row.values.push_back(eval(*it.expr, scope, c));
        }
        if (vitems) {
          o.row.distance = vitems->dists[i];
          o.distance_key = vitems->dists[i];
          o.has_distance = true;
          o.row.id = vitems->ids[i];
        } else if (scope.size() == 1 && c[0] >= 0) {
          o.row.id = scope[0].row_id(c[0]);
        }
        for (const auto& ob : s.order_by)
          o.order_keys.push_back(eval(*order_sort_target(ob, s), scope, c));
        staged.push_back(std::move(o));
      }
    }

    // ordering: distance first on vector levels, then explicit keys, then
    // the deterministic construction order (stable sort).
    const bool need_sort = vitems != nullptr || !s.order_by.empty();
    if (need_sort) {
      std::stable_sort(staged.begin(), staged.end(), [&](const OutRow& a, const OutRow& b) {
        if (a.has_distance && b.has_distance) {
          if (a.distance_key != b.distance_key) return a.distance_key < b.distance_key;
        }
        for (std::size_t i = 0; i < s.order_by.size(); ++i) {
          const int c = value_compare(a.order_keys[i], b.order_keys[i]);
          if (c != 0) return s.order_by[i].descending ? c > 0 : c < 0;
        }
        return false;  // stability keeps construction / (distance, id) order
      });
    }

    if (!s.vector_clause && s.limit && staged.size() > *s.limit) staged.resize(*s.limit);

    // row ids: vector items and single-source plain rows carry provenance
    // ids; joined or grouped outputs get ordinals in final order.
    const bool provenance_ids = !grouped && (vitems != nullptr || scope.size() == 1);
    RowId ordinal = 0;
    for (auto& o : staged) {
      if (!provenance_ids) o.row.id = ++ordinal;
      out.rows.push_back(std::move(o.row));
    }
    return out;
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

  const HybridStore& store_;
  ExecStrategy strategy_;
  const Embedder* embedder_;
  Clock::time_point deadline_;
  std::uint64_t tick_ = 0;
  std::map<std::string, EvalTable> env_;
  std::unordered_map<const SelectStmt*, SubqueryResult> subquery_cache_;
};

ResultSet to_result_set(EvalTable&& t) {
  ResultSet r;
  r.columns = std::move(t.columns);
  r.truncated = t.truncated;
  r.rows.reserve(t.rows.size());
  for (auto& row : t.rows) r.rows.push_back({row.id, std::move(row.values), row.distance});
  return r;
}

}  // namespace

ResultSet execute(const HybridStore& store, const VectorSqlQuery& query,
                  const ExecStrategy& strategy, const Embedder* embedder,
                  const ExecOptions& options) {
  Evaluator ev(store, strategy, embedder, options);
  return to_result_set(ev.eval_query(query));
}

ResultSet execute_plain_sql(const HybridStore& store, const VectorSqlQuery& query,
                            const ExecOptions& options) {
  if (!collect_vector_clauses(query).empty())
    throw ExecError("execute_plain_sql requires a query with no vector clause");
  return execute(store, query, PreFilter{}, nullptr, options);
}

RecallReport measure_recall(const HybridStore& store, const VectorSqlQuery& query,
                            const ExecStrategy& strategy, const Embedder* embedder,
                            const ExecOptions& options) {
  if (collect_vector_clauses(query).empty())
    throw ExecError("measure_recall requires a query with at least one vector clause");
  const ResultSet truth = execute(store, query, PreFilter{}, embedder, options);
  const ResultSet got = execute(store, query, strategy, embedder, options);

  std::unordered_map<RowId, bool> truth_ids;
  for (const auto& row : truth.rows) truth_ids.emplace(row.id, true);
  std::size_t hit = 0;
  for (const auto& row : got.rows)
    if (truth_ids.count(row.id)) ++hit;

  RecallReport r;
  r.result_size = got.rows.size();
  r.truth_size = truth.rows.size();
  r.precision = got.rows.empty() ? 0.0 : static_cast<double>(hit) / got.rows.size();
  r.recall = truth.rows.empty() ? 0.0 : static_cast<double>(hit) / truth.rows.size();
  return r;
}

}  // namespace vecsql::exec
