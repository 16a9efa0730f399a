// Copyright 2026 The Tablemark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Logical-form accuracy, execution accuracy and the per-slot breakdown
// (SELECT column, SELECT agg, WHERE number/column/op/value).

#ifndef TABLEMARK_EVAL_HPP
#define TABLEMARK_EVAL_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tablemark/data.hpp"
#include "tablemark/exec.hpp"

namespace tablemark {

struct Prediction {
  std::size_t idx = 0;
  SqlQuery sql;
};

struct SlotResult {
  bool sc = false;
  bool sa = false;
  bool wn = false;
  bool wc = false;
  bool wo = false;
  bool wv = false;

  bool all() const { return sc && sa && wn && wc && wo && wv; }
  bool operator==(const SlotResult&) const = default;
};

inline constexpr std::array<std::string_view, 6> kSlotKeys = {"sc", "sa", "wn", "wc", "wo", "wv"};
inline constexpr std::array<std::string_view, 6> kSlotTitles = {"SELECT column", "SELECT agg",   "WHERE number",
                                                                "WHERE column",  "WHERE op",     "WHERE value"};

struct ExampleScore {
  bool lf = false;
  bool ex = false;
  SlotResult slots;
};

struct EvalOptions {
  double rel_tol = kDefaultRelTolerance;
  // When both queries fail to execute, count the pair as an execution match.
  bool both_errors_match = true;
};

struct EvalReport {
  std::size_t n = 0;
  double lf_acc = 0.0;
  double ex_acc = 0.0;
  std::array<double, 6> slot_acc{};  // ordered as kSlotKeys
  std::vector<ExampleScore> per_example;
  EvalOptions options;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct KeyedCondition {
  std::size_t col;
  std::string key;
  int op;
  auto operator<=>(const KeyedCondition&) const = default;
};

// Conditions sorted by (column, value key, op). Slot comparisons align the
// two sides position by position in this order and each slot looks at one
// field, so agreement on columns, ops and values together is exactly
// multiset equality of the conditions, while a single wrong field costs
// only its own slot.
inline std::vector<KeyedCondition> canonical_conditions(const std::vector<Condition>& conds) {
  std::vector<KeyedCondition> out;
  out.reserve(conds.size());
  for (const auto& c : conds) out.push_back({c.col, value_key(c.value), static_cast<int>(c.op)});
  std::sort(out.begin(), out.end());
  return out;
}

template <typename Proj>
bool aligned_equal(const std::vector<KeyedCondition>& a, const std::vector<KeyedCondition>& b, Proj proj) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (proj(a[i]) != proj(b[i])) return false;
  }
  return true;
}

}  // namespace detail

inline bool lf_match(const SqlQuery& pred, const SqlQuery& gold) {
  return pred.sel == gold.sel && pred.agg == gold.agg &&
         detail::canonical_conditions(pred.conds) == detail::canonical_conditions(gold.conds);
}

inline SlotResult slot_breakdown(const SqlQuery& pred, const SqlQuery& gold) {
  auto p = detail::canonical_conditions(pred.conds);
  auto g = detail::canonical_conditions(gold.conds);
  SlotResult s;
  s.sc = pred.sel == gold.sel;
  s.sa = pred.agg == gold.agg;
  s.wn = pred.conds.size() == gold.conds.size();
  s.wc = detail::aligned_equal(p, g, [](const auto& c) { return c.col; });
  s.wo = detail::aligned_equal(p, g, [](const auto& c) { return c.op; });
  s.wv = detail::aligned_equal(p, g, [](const auto& c) { return c.key; });
  return s;
}

inline bool ex_match(const SqlQuery& pred, const SqlQuery& gold, const Table& table, const EvalOptions& opts = {}) {
  std::optional<ResultSet> p, g;
  try {
    p = execute(pred, table);
  } catch (const ExecError&) {
  }
  try {
    g = execute(gold, table);
  } catch (const ExecError&) {
  }
  if (!p && !g) return opts.both_errors_match;
  if (!p || !g) return false;
  return results_equal(*p, *g, opts.rel_tol);
}

/// Scores predictions against the examples they answer. Every example needs
/// exactly one prediction; `idx` is the example's position in its file.
inline EvalReport evaluate(std::span<const Prediction> predictions, std::span<const Example> examples,
                           const TableMap& tables, const EvalOptions& opts = {}) {
  if (predictions.size() != examples.size()) {
    throw EvalError(std::to_string(predictions.size()) + " predictions for " + std::to_string(examples.size()) +
                    " examples");
  }
  std::vector<const Prediction*> by_idx(examples.size(), nullptr);
  for (const auto& p : predictions) {
    if (p.idx >= examples.size()) throw EvalError("prediction for unknown example idx " + std::to_string(p.idx));
    if (by_idx[p.idx]) throw EvalError("duplicate prediction for example idx " + std::to_string(p.idx));
    by_idx[p.idx] = &p;
  }

  EvalReport report;
  report.n = examples.size();
  report.options = opts;
  report.per_example.reserve(examples.size());
  std::size_t lf = 0, ex = 0;
  std::array<std::size_t, 6> slots{};
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Example& gold = examples[i];
    auto it = tables.find(gold.table_id);
    if (it == tables.end()) throw EvalError("unknown table_id '" + gold.table_id + "'");
    const SqlQuery& pred = by_idx[i]->sql;

    ExampleScore s;
    s.lf = lf_match(pred, gold.gold);
    s.ex = ex_match(pred, gold.gold, it->second, opts);
    s.slots = slot_breakdown(pred, gold.gold);
    lf += s.lf;
    ex += s.ex;
    const std::array<bool, 6> flags = {s.slots.sc, s.slots.sa, s.slots.wn, s.slots.wc, s.slots.wo, s.slots.wv};
    for (std::size_t k = 0; k < flags.size(); ++k) slots[k] += flags[k];
    report.per_example.push_back(s);
  }
  if (report.n > 0) {
    const double n = static_cast<double>(report.n);
    report.lf_acc = static_cast<double>(lf) / n;
    report.ex_acc = static_cast<double>(ex) / n;
    for (std::size_t k = 0; k < slots.size(); ++k) report.slot_acc[k] = static_cast<double>(slots[k]) / n;
  }
  return report;
}

inline std::vector<Prediction> load_predictions(std::istream& in, std::string_view source = "<predictions>") {
  std::vector<Prediction> preds;
  detail::for_each_json_line(in, source, [&](const Json& obj, std::size_t lineno) {
    const std::string ctx = detail::where(source, lineno);
    std::int64_t idx = detail::require_int(obj, "idx", ctx);
    if (idx < 0) throw DataError(ctx + "idx " + std::to_string(idx) + " is negative");
    preds.push_back({static_cast<std::size_t>(idx), parse_sql(detail::require(obj, "sql", ctx), ctx)});
  });
  return preds;
}

inline std::vector<Prediction> load_predictions(const std::string& path) {
  auto in = detail::open_input(path);
  return load_predictions(in, path);
}

inline Json prediction_to_json(const Prediction& p) {
  Json j;
  j["idx"] = p.idx;
  j["sql"] = sql_to_json(p.sql);
  return j;
}

inline Json slots_to_json(const SlotResult& s) {
  Json j;
  j["sc"] = s.sc;
  j["sa"] = s.sa;
  j["wn"] = s.wn;
  j["wc"] = s.wc;
  j["wo"] = s.wo;
  j["wv"] = s.wv;
  return j;
}

inline Json report_to_json(const EvalReport& r) {
  Json slot_acc;
  for (std::size_t k = 0; k < kSlotKeys.size(); ++k) slot_acc[std::string(kSlotKeys[k])] = r.slot_acc[k];
  Json per = Json::array();
  for (std::size_t i = 0; i < r.per_example.size(); ++i) {
    const auto& s = r.per_example[i];
    Json e;
    e["idx"] = i;
    e["lf"] = s.lf;
    e["ex"] = s.ex;
    e["slots"] = slots_to_json(s.slots);
    per.push_back(std::move(e));
  }
  Json meta;
  meta["both_errors_match"] = r.options.both_errors_match;
  meta["rel_tolerance"] = r.options.rel_tol;

  Json j;
  j["n"] = r.n;
  j["lf_acc"] = r.lf_acc;
  j["ex_acc"] = r.ex_acc;
  j["slot_acc"] = std::move(slot_acc);
  j["meta"] = std::move(meta);
  j["per_example"] = std::move(per);
  return j;
}

}  // namespace tablemark

#endif  // TABLEMARK_EVAL_HPP
