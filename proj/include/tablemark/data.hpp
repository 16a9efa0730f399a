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

// WikiSQL data model: tables, questions and logical forms, plus JSONL
// loaders and the canonical serializer.

#ifndef TABLEMARK_DATA_HPP
#define TABLEMARK_DATA_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tablemark/tokenize.hpp"

namespace tablemark {

using Json = nlohmann::ordered_json;

enum class ColumnKind : std::uint8_t { Text, Real };

/// Aggregation slot, indexed as in WikiSQL.
enum class Agg : std::uint8_t { None = 0, Max = 1, Min = 2, Count = 3, Sum = 4, Avg = 5 };

/// Condition operator, indexed as in WikiSQL.
enum class Op : std::uint8_t { Eq = 0, Gt = 1, Lt = 2 };

inline constexpr int kNumAggs = 6;
inline constexpr int kNumOps = 3;

inline constexpr std::array<std::string_view, kNumAggs> kAggNames = {"", "MAX", "MIN", "COUNT", "SUM", "AVG"};
inline constexpr std::array<std::string_view, kNumOps> kOpNames = {"=", ">", "<"};

inline std::string_view agg_name(Agg agg) { return kAggNames[static_cast<std::size_t>(agg)]; }
inline std::string_view op_name(Op op) { return kOpNames[static_cast<std::size_t>(op)]; }

struct Cell {
  std::string raw;
  Tokens norm;
  std::optional<double> numeric;

  bool operator==(const Cell&) const = default;
};

inline Cell make_cell(std::string raw) {
  Cell cell;
  cell.norm = tokenize(raw);
  cell.numeric = parse_number(raw);
  cell.raw = std::move(raw);
  return cell;
}

struct Table {
  std::string id;
  std::vector<std::string> header;
  std::vector<ColumnKind> types;
  std::vector<std::vector<Cell>> rows;
  // tokenize(header[j]), filled by make_table.
  std::vector<Tokens> header_norm;

  std::size_t num_columns() const { return header.size(); }
  bool operator==(const Table&) const = default;
};

struct Condition {
  std::size_t col = 0;
  Op op = Op::Eq;
  std::string value;

  bool operator==(const Condition&) const = default;
};

struct SqlQuery {
  std::size_t sel = 0;
  Agg agg = Agg::None;
  std::vector<Condition> conds;

  bool operator==(const SqlQuery&) const = default;
};

struct Example {
  std::string question_raw;
  Tokens question_tokens;
  std::string table_id;
  SqlQuery gold;

  bool operator==(const Example&) const = default;
};

using TableMap = std::map<std::string, Table, std::less<>>;

/// Raised for malformed or invalid input. The message carries the source
/// name and line number when the error comes from a file.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

// Cells and condition values may be JSON strings or numbers in WikiSQL.
inline std::optional<std::string> scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned() || j.is_number_float()) return j.dump();
  return std::nullopt;
}

inline const Json& require(const Json& obj, const char* key, std::string_view ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string(ctx) + "missing field '" + key + "'");
  return *it;
}

inline std::int64_t require_int(const Json& obj, const char* key, std::string_view ctx) {
  const Json& j = require(obj, key, ctx);
  if (!j.is_number_integer()) throw DataError(std::string(ctx) + "field '" + key + "' must be an integer");
  return j.get<std::int64_t>();
}

template <typename Fn>
void for_each_json_line(std::istream& in, std::string_view source, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(where(source, lineno) + "malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError(where(source, lineno) + "expected a JSON object");
    fn(obj, lineno);
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Builds a table and checks its shape: one type per header entry, rows as
/// wide as the header, and real columns holding only numbers.
inline Table make_table(std::string id, std::vector<std::string> header, std::vector<ColumnKind> types,
                        std::vector<std::vector<std::string>> rows) {
  if (types.size() != header.size()) {
    throw DataError("table '" + id + "': " + std::to_string(types.size()) + " types for " +
                    std::to_string(header.size()) + " header columns");
  }
  Table t;
  t.rows.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw DataError("table '" + id + "' row " + std::to_string(r) + ": width " + std::to_string(rows[r].size()) +
                      " does not match header width " + std::to_string(header.size()));
    }
    std::vector<Cell> row;
    row.reserve(rows[r].size());
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      Cell cell = make_cell(std::move(rows[r][c]));
      if (types[c] == ColumnKind::Real && !cell.numeric) {
        throw DataError("table '" + id + "' row " + std::to_string(r) + " column " + std::to_string(c) +
                        ": real column holds non-numeric value '" + cell.raw + "'");
      }
      row.push_back(std::move(cell));
    }
    t.rows.push_back(std::move(row));
  }
  t.header_norm.reserve(header.size());
  for (const auto& h : header) t.header_norm.push_back(tokenize(h));
  t.id = std::move(id);
  t.header = std::move(header);
  t.types = std::move(types);
  return t;
}

/// Checks that every column index in the query fits the table.
inline void validate_query(const SqlQuery& sql, const Table& table, std::string_view ctx = {}) {
  const std::size_t width = table.num_columns();
  if (sql.sel >= width) {
    throw DataError(std::string(ctx) + "sel " + std::to_string(sql.sel) + " out of range for table '" + table.id +
                    "' with " + std::to_string(width) + " columns");
  }
  for (std::size_t i = 0; i < sql.conds.size(); ++i) {
    if (sql.conds[i].col >= width) {
      throw DataError(std::string(ctx) + "condition " + std::to_string(i) + " column " +
                      std::to_string(sql.conds[i].col) + " out of range for table '" + table.id + "'");
    }
  }
}

/// Parses the `sql` object of an example or prediction. Ranges of agg and op
/// are checked here; column bounds need the table and are checked separately.
inline SqlQuery parse_sql(const Json& j, std::string_view ctx) {
  if (!j.is_object()) throw DataError(std::string(ctx) + "'sql' must be an object");
  SqlQuery sql;
  std::int64_t sel = detail::require_int(j, "sel", ctx);
  std::int64_t agg = detail::require_int(j, "agg", ctx);
  if (sel < 0) throw DataError(std::string(ctx) + "sel " + std::to_string(sel) + " is negative");
  if (agg < 0 || agg >= kNumAggs) throw DataError(std::string(ctx) + "agg " + std::to_string(agg) + " outside 0..5");
  sql.sel = static_cast<std::size_t>(sel);
  sql.agg = static_cast<Agg>(agg);

  const Json& conds = detail::require(j, "conds", ctx);
  if (!conds.is_array()) throw DataError(std::string(ctx) + "'conds' must be an array");
  for (std::size_t i = 0; i < conds.size(); ++i) {
    const Json& c = conds[i];
    std::string cctx = std::string(ctx) + "condition " + std::to_string(i) + ": ";
    if (!c.is_array() || c.size() != 3) throw DataError(cctx + "expected [col, op, value]");
    if (!c[0].is_number_integer() || !c[1].is_number_integer()) throw DataError(cctx + "col and op must be integers");
    std::int64_t col = c[0].get<std::int64_t>();
    std::int64_t op = c[1].get<std::int64_t>();
    if (col < 0) throw DataError(cctx + "column " + std::to_string(col) + " is negative");
    if (op < 0 || op >= kNumOps) throw DataError(cctx + "op " + std::to_string(op) + " outside 0..2");
    auto value = detail::scalar_text(c[2]);
    if (!value) throw DataError(cctx + "value must be a string or number");
    sql.conds.push_back({static_cast<std::size_t>(col), static_cast<Op>(op), std::move(*value)});
  }
  return sql;
}

inline TableMap load_tables(std::istream& in, std::string_view source = "<tables>") {
  TableMap tables;
  detail::for_each_json_line(in, source, [&](const Json& obj, std::size_t lineno) {
    const std::string ctx = detail::where(source, lineno);
    const Json& id = detail::require(obj, "id", ctx);
    const Json& header = detail::require(obj, "header", ctx);
    const Json& types = detail::require(obj, "types", ctx);
    const Json& rows = detail::require(obj, "rows", ctx);
    if (!id.is_string()) throw DataError(ctx + "'id' must be a string");
    if (!header.is_array() || !types.is_array() || !rows.is_array()) {
      throw DataError(ctx + "'header', 'types' and 'rows' must be arrays");
    }

    std::vector<std::string> names;
    for (const auto& h : header) {
      if (!h.is_string()) throw DataError(ctx + "header entries must be strings");
      names.push_back(h.get<std::string>());
    }
    std::vector<ColumnKind> kinds;
    for (const auto& t : types) {
      if (t == "text") {
        kinds.push_back(ColumnKind::Text);
      } else if (t == "real") {
        kinds.push_back(ColumnKind::Real);
      } else {
        throw DataError(ctx + "unknown column type " + t.dump());
      }
    }
    std::vector<std::vector<std::string>> cells;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array()) throw DataError(ctx + "row " + std::to_string(r) + " must be an array");
      std::vector<std::string> row;
      for (const auto& v : rows[r]) {
        auto text = detail::scalar_text(v);
        if (!text) throw DataError(ctx + "row " + std::to_string(r) + ": cells must be strings or numbers");
        row.push_back(std::move(*text));
      }
      cells.push_back(std::move(row));
    }

    Table table;
    try {
      table = make_table(id.get<std::string>(), std::move(names), std::move(kinds), std::move(cells));
    } catch (const DataError& e) {
      throw DataError(ctx + e.what());
    }
    if (tables.count(table.id)) throw DataError(ctx + "duplicate table id '" + table.id + "'");
    std::string key = table.id;
    tables.emplace(std::move(key), std::move(table));
  });
  return tables;
}

inline TableMap load_tables(const std::string& path) {
  auto in = detail::open_input(path);
  return load_tables(in, path);
}

inline std::vector<Example> load_examples(std::istream& in, const TableMap& tables,
                                          std::string_view source = "<examples>") {
  std::vector<Example> examples;
  detail::for_each_json_line(in, source, [&](const Json& obj, std::size_t lineno) {
    const std::string ctx = detail::where(source, lineno);
    const Json& question = detail::require(obj, "question", ctx);
    const Json& table_id = detail::require(obj, "table_id", ctx);
    if (!question.is_string()) throw DataError(ctx + "'question' must be a string");
    if (!table_id.is_string()) throw DataError(ctx + "'table_id' must be a string");

    Example ex;
    ex.question_raw = question.get<std::string>();
    ex.question_tokens = tokenize(ex.question_raw);
    ex.table_id = table_id.get<std::string>();
    auto it = tables.find(ex.table_id);
    if (it == tables.end()) throw DataError(ctx + "unknown table_id '" + ex.table_id + "'");
    ex.gold = parse_sql(detail::require(obj, "sql", ctx), ctx);
    validate_query(ex.gold, it->second, ctx);
    examples.push_back(std::move(ex));
  });
  return examples;
}

inline std::vector<Example> load_examples(const std::string& path, const TableMap& tables) {
  auto in = detail::open_input(path);
  return load_examples(in, tables, path);
}

inline Json sql_to_json(const SqlQuery& sql) {
  Json conds = Json::array();
  for (const auto& c : sql.conds) conds.push_back(Json::array({c.col, static_cast<int>(c.op), c.value}));
  Json j;
  j["sel"] = sql.sel;
  j["agg"] = static_cast<int>(sql.agg);
  j["conds"] = std::move(conds);
  return j;
}

inline Json table_to_json(const Table& table) {
  Json types = Json::array();
  for (auto k : table.types) types.push_back(k == ColumnKind::Real ? "real" : "text");
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(cell.raw);
    rows.push_back(std::move(r));
  }
  Json j;
  j["id"] = table.id;
  j["header"] = table.header;
  j["types"] = std::move(types);
  j["rows"] = std::move(rows);
  return j;
}

inline Json example_to_json(const Example& ex) {
  Json j;
  j["question"] = ex.question_raw;
  j["table_id"] = ex.table_id;
  j["sql"] = sql_to_json(ex.gold);
  return j;
}

/// Canonical JSONL: fixed key order, one object per line, LF terminated.
inline void write_tables(std::ostream& out, const TableMap& tables) {
  for (const auto& [id, table] : tables) out << table_to_json(table).dump() << '\n';
}

inline void write_examples(std::ostream& out, const std::vector<Example>& examples) {
  for (const auto& ex : examples) out << example_to_json(ex).dump() << '\n';
}

}  // namespace tablemark

#endif  // TABLEMARK_DATA_HPP
