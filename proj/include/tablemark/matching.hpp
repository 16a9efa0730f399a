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

// Table-content features for a question: the question mark vector tags
// question tokens covered by a table cell or header name, and the header mark
// vector tags columns whose name or content appears in the question.

#ifndef TABLEMARK_MATCHING_HPP
#define TABLEMARK_MATCHING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tablemark/data.hpp"

namespace tablemark {

/// Question token tags.
enum QuestionMark : std::uint8_t {
  kNoMark = 0,
  kStart = 1,
  kMiddle = 2,
  kEnd = 3,
  kHeaderName = 4,
};

/// Column tags.
enum HeaderMark : std::uint8_t {
  kHeaderUnmatched = 0,
  kHeaderInQuestion = 1,
  kCellInQuestion = 2,
};

struct QuestionMarkVector {
  std::vector<std::uint8_t> values;
  bool operator==(const QuestionMarkVector&) const = default;
};

struct HeaderMarkVector {
  std::vector<std::uint8_t> values;
  bool operator==(const HeaderMarkVector&) const = default;
};

struct MatchSpan {
  enum class Kind : std::uint8_t { Cell, Header };

  std::size_t start = 0;
  std::size_t length = 0;
  Kind kind = Kind::Cell;
  std::size_t row = 0;  // meaningful for Kind::Cell only
  std::size_t col = 0;

  bool operator==(const MatchSpan&) const = default;
};

/// First index where `phrase` occurs as a contiguous run of `question`.
/// Empty phrases never match.
inline std::optional<std::size_t> contains_at(std::span<const std::string> question,
                                              std::span<const std::string> phrase) {
  if (phrase.empty() || phrase.size() > question.size()) return std::nullopt;
  const std::size_t last = question.size() - phrase.size();
  for (std::size_t start = 0; start <= last; ++start) {
    if (question[start] != phrase[0]) continue;
    std::size_t k = 1;
    while (k < phrase.size() && question[start + k] == phrase[k]) ++k;
    if (k == phrase.size()) return start;
  }
  return std::nullopt;
}

struct QuestionEncoding {
  QuestionMarkVector qv;
  // The cell span that produced the START/MIDDLE/END tags (at most one), then
  // every header-name span in column order.
  std::vector<MatchSpan> spans;
};

/// Question mark vector. Cells are scanned row-major and only the first
/// matching cell is tagged: MIDDLE over its span, START on its first token,
/// and END on the token just past it when that token exists. Header names
/// then overwrite the token where they first occur with the header tag.
inline QuestionEncoding build_question_vector(std::span<const std::string> question, const Table& table) {
  QuestionEncoding enc;
  auto& v = enc.qv.values;
  v.assign(question.size(), kNoMark);

  bool tagged = false;
  for (std::size_t r = 0; r < table.rows.size() && !tagged; ++r) {
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Tokens& phrase = row[c].norm;
      auto start = contains_at(question, phrase);
      if (!start) continue;
      const std::size_t end = *start + phrase.size();
      for (std::size_t i = *start; i < end; ++i) v[i] = kMiddle;
      v[*start] = kStart;
      if (end < v.size()) v[end] = kEnd;
      enc.spans.push_back({*start, phrase.size(), MatchSpan::Kind::Cell, r, c});
      tagged = true;
      break;
    }
  }

  for (std::size_t c = 0; c < table.header_norm.size(); ++c) {
    const Tokens& name = table.header_norm[c];
    if (auto start = contains_at(question, name)) {
      v[*start] = kHeaderName;
      enc.spans.push_back({*start, name.size(), MatchSpan::Kind::Header, 0, c});
    }
  }
  return enc;
}

/// Header mark vector. Columns named in the question get 1; columns owning
/// any cell that occurs in the question get 2, which wins over 1.
inline HeaderMarkVector build_header_vector(std::span<const std::string> question, const Table& table) {
  HeaderMarkVector hv;
  hv.values.assign(table.num_columns(), kHeaderUnmatched);
  for (std::size_t c = 0; c < table.header_norm.size(); ++c) {
    if (contains_at(question, table.header_norm[c])) hv.values[c] = kHeaderInQuestion;
  }
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (contains_at(question, row[c].norm)) hv.values[c] = kCellInQuestion;
    }
  }
  return hv;
}

/// Every match in the question: all matching cells in row-major order, then
/// all matching header names in column order. This is the decoder's input;
/// unlike the question vector it does not stop at the first cell.
inline std::vector<MatchSpan> find_matches(std::span<const std::string> question, const Table& table) {
  std::vector<MatchSpan> spans;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      const Tokens& phrase = table.rows[r][c].norm;
      if (auto start = contains_at(question, phrase)) {
        spans.push_back({*start, phrase.size(), MatchSpan::Kind::Cell, r, c});
      }
    }
  }
  for (std::size_t c = 0; c < table.header_norm.size(); ++c) {
    if (auto start = contains_at(question, table.header_norm[c])) {
      spans.push_back({*start, table.header_norm[c].size(), MatchSpan::Kind::Header, 0, c});
    }
  }
  return spans;
}

struct EncodedExample {
  std::size_t idx = 0;
  QuestionMarkVector qv;
  HeaderMarkVector hv;
  std::vector<MatchSpan> spans;
};

inline const Table& table_for(const Example& ex, const TableMap& tables) {
  auto it = tables.find(ex.table_id);
  if (it == tables.end()) throw DataError("unknown table_id '" + ex.table_id + "'");
  return it->second;
}

inline EncodedExample encode_example(std::size_t idx, const Example& ex, const TableMap& tables) {
  const Table& table = table_for(ex, tables);
  EncodedExample out;
  out.idx = idx;
  out.qv = build_question_vector(ex.question_tokens, table).qv;
  out.hv = build_header_vector(ex.question_tokens, table);
  out.spans = find_matches(ex.question_tokens, table);
  return out;
}

inline std::vector<EncodedExample> encode_dataset(std::span<const Example> examples, const TableMap& tables) {
  std::vector<EncodedExample> out;
  out.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) out.push_back(encode_example(i, examples[i], tables));
  return out;
}

inline Json span_to_json(const MatchSpan& s) {
  Json source;
  if (s.kind == MatchSpan::Kind::Cell) {
    source["kind"] = "cell";
    source["row"] = s.row;
  } else {
    source["kind"] = "header";
  }
  source["col"] = s.col;
  Json j;
  j["start"] = s.start;
  j["len"] = s.length;
  j["source"] = std::move(source);
  return j;
}

inline Json encoded_to_json(const EncodedExample& e) {
  Json spans = Json::array();
  for (const auto& s : e.spans) spans.push_back(span_to_json(s));
  Json j;
  j["idx"] = e.idx;
  j["qv"] = e.qv.values;
  j["hv"] = e.hv.values;
  j["spans"] = std::move(spans);
  return j;
}

}  // namespace tablemark

#endif  // TABLEMARK_MATCHING_HPP
