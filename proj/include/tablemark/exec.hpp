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

#ifndef TABLEMARK_EXEC_HPP
#define TABLEMARK_EXEC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tablemark/data.hpp"

namespace tablemark {

class ExecError : public std::runtime_error {
 public:
  enum class Reason : std::uint8_t { NonNumericAggregate, ColumnOutOfRange, BadOperator };

  ExecError(Reason reason, const std::string& detail)
      : std::runtime_error(std::string(name(reason)) + ": " + detail), reason_(reason) {}

  Reason reason() const { return reason_; }

  static std::string_view name(Reason r) {
    switch (r) {
      case Reason::NonNumericAggregate: return "non_numeric_aggregate";
      case Reason::ColumnOutOfRange: return "column_out_of_range";
      case Reason::BadOperator: return "bad_operator";
    }
    return "unknown";
  }

 private:
  Reason reason_;
};

struct ResultSet {
  enum class Kind : std::uint8_t { Column, Scalar, Empty };

  Kind kind = Kind::Empty;
  std::vector<Cell> values;  // Kind::Column, in table row order
  std::optional<double> scalar;

  static ResultSet empty() { return {}; }
  static ResultSet of_scalar(double v) { return {Kind::Scalar, {}, v}; }
  static ResultSet of_column(std::vector<Cell> values) { return {Kind::Column, std::move(values), std::nullopt}; }

  bool is_empty() const { return kind == Kind::Empty; }
};

inline constexpr double kDefaultRelTolerance = 1e-6;

/// Applies one WHERE predicate to a cell. Equality is numeric when both
/// sides are numbers and normalized-text otherwise; > and < hold only
/// between two numbers.
inline bool eval_cond(const Cell& cell, Op op, std::string_view value) {
  switch (op) {
    case Op::Eq: {
      auto v = parse_number(value);
      if (cell.numeric && v) return *cell.numeric == *v;
      if (cell.numeric || v) return false;
      return cell.norm == tokenize(value);
    }
    case Op::Gt:
    case Op::Lt: {
      if (!cell.numeric) return false;
      auto v = parse_number(value);
      if (!v) return false;
      return op == Op::Gt ? *cell.numeric > *v : *cell.numeric < *v;
    }
  }
  throw ExecError(ExecError::Reason::BadOperator, "operator index " + std::to_string(static_cast<int>(op)));
}

/// Runs a logical form: keep rows satisfying every condition, project the
/// selected column, then aggregate. Zero surviving rows give COUNT 0 and an
/// empty result for everything else.
inline ResultSet execute(const SqlQuery& sql, const Table& table) {
  const std::size_t width = table.num_columns();
  if (sql.sel >= width) {
    throw ExecError(ExecError::Reason::ColumnOutOfRange, "sel " + std::to_string(sql.sel));
  }
  for (const auto& c : sql.conds) {
    if (c.col >= width) throw ExecError(ExecError::Reason::ColumnOutOfRange, "condition column " + std::to_string(c.col));
    if (static_cast<int>(c.op) >= kNumOps) {
      throw ExecError(ExecError::Reason::BadOperator, "operator index " + std::to_string(static_cast<int>(c.op)));
    }
  }
  if (static_cast<int>(sql.agg) >= kNumAggs) {
    throw ExecError(ExecError::Reason::BadOperator, "aggregate index " + std::to_string(static_cast<int>(sql.agg)));
  }

  std::vector<const Cell*> picked;
  for (const auto& row : table.rows) {
    bool keep = std::all_of(sql.conds.begin(), sql.conds.end(),
                            [&](const Condition& c) { return eval_cond(row[c.col], c.op, c.value); });
    if (keep) picked.push_back(&row[sql.sel]);
  }

  if (sql.agg == Agg::Count) return ResultSet::of_scalar(static_cast<double>(picked.size()));
  if (picked.empty()) return ResultSet::empty();
  if (sql.agg == Agg::None) {
    std::vector<Cell> values;
    values.reserve(picked.size());
    for (const Cell* c : picked) values.push_back(*c);
    return ResultSet::of_column(std::move(values));
  }

  std::vector<double> nums;
  nums.reserve(picked.size());
  for (const Cell* c : picked) {
    if (!c->numeric) {
      throw ExecError(ExecError::Reason::NonNumericAggregate,
                      std::string(agg_name(sql.agg)) + " over '" + c->raw + "' in column " + std::to_string(sql.sel));
    }
    nums.push_back(*c->numeric);
  }
  switch (sql.agg) {
    case Agg::Max: return ResultSet::of_scalar(*std::max_element(nums.begin(), nums.end()));
    case Agg::Min: return ResultSet::of_scalar(*std::min_element(nums.begin(), nums.end()));
    case Agg::Sum:
    case Agg::Avg: {
      double sum = 0.0;
      for (double x : nums) sum += x;
      return ResultSet::of_scalar(sql.agg == Agg::Sum ? sum : sum / static_cast<double>(nums.size()));
    }
    default: break;
  }
  return ResultSet::empty();  // unreachable
}

inline bool scalars_close(double a, double b, double rel_tol) {
  if (a == b) return true;
  return std::fabs(a - b) <= rel_tol * std::max(std::fabs(a), std::fabs(b));
}

/// Result equality behind execution accuracy: scalars within a relative
/// tolerance, columns as multisets of value keys, empty equal to empty.
inline bool results_equal(const ResultSet& a, const ResultSet& b, double rel_tol = kDefaultRelTolerance) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ResultSet::Kind::Empty: return true;
    case ResultSet::Kind::Scalar: return scalars_close(*a.scalar, *b.scalar, rel_tol);
    case ResultSet::Kind::Column: {
      if (a.values.size() != b.values.size()) return false;
      auto keys = [](const std::vector<Cell>& cells) {
        std::vector<std::string> k;
        k.reserve(cells.size());
        for (const auto& c : cells) k.push_back(c.numeric ? canonical_number(*c.numeric) : join_tokens(c.norm));
        std::sort(k.begin(), k.end());
        return k;
      };
      return keys(a.values) == keys(b.values);
    }
  }
  return false;
}

inline Json result_to_json(const ResultSet& r) {
  Json j;
  switch (r.kind) {
    case ResultSet::Kind::Empty:
      j["kind"] = "empty";
      break;
    case ResultSet::Kind::Scalar: {
      j["kind"] = "scalar";
      double v = *r.scalar;
      if (std::nearbyint(v) == v && std::fabs(v) < 9.0e15) {
        j["value"] = static_cast<std::int64_t>(v);
      } else {
        j["value"] = v;
      }
      break;
    }
    case ResultSet::Kind::Column: {
      j["kind"] = "column";
      Json values = Json::array();
      for (const auto& c : r.values) values.push_back(c.raw);
      j["values"] = std::move(values);
      break;
    }
  }
  return j;
}

}  // namespace tablemark

#endif  // TABLEMARK_EXEC_HPP
