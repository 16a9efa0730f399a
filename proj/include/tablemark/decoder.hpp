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

// Learning-free baseline decoder driven by the mark vectors and match spans.
//
// Slots are filled in dependency order: WHERE conditions (number, column,
// value) from matched cell spans, operators from comparative cue words, the
// SELECT column from headers named in the question that no condition uses,
// and the aggregate from question cue words. Each slot contributes a list of
// alternatives; candidates are their cartesian product, scored and ranked.

#ifndef TABLEMARK_DECODER_HPP
#define TABLEMARK_DECODER_HPP

#include <algorithm>
#include <cstddef>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tablemark/data.hpp"
#include "tablemark/exec.hpp"
#include "tablemark/matching.hpp"

namespace tablemark {

/// Every tunable rule of the decoder. Defaults are the documented baseline.
struct DecoderConfig {
  std::size_t beam = 8;
  // A cue directly before a numeric condition value (or before "than" and
  // the value) widens that condition's operator to > / <.
  std::vector<std::string> greater_cues = {"more", "greater", "over", "above"};
  std::vector<std::string> less_cues = {"less", "fewer", "under", "below"};
  std::vector<std::string> max_cues = {"most", "highest"};
  std::vector<std::string> min_cues = {"least", "lowest"};
  // Question prefix selecting COUNT.
  std::vector<std::string> count_prefix = {"how", "many"};
  std::size_t max_conditions = 4;
  std::size_t max_column_choices = 2;
  int span_weight = 4;
  int header_weight = 2;
  int cue_weight = 1;
};

struct Provenance {
  std::string sel;
  std::string agg;
  std::vector<std::string> conds;
  bool operator==(const Provenance&) const = default;
};

struct Candidate {
  SqlQuery sql;
  int score = 0;
  Provenance provenance;
  bool operator==(const Candidate&) const = default;
};

namespace detail {

struct ColumnChoice {
  std::size_t row;
  std::size_t col;
};

struct OpChoice {
  Op op;
  bool cued;
  std::string note;
};

struct ConditionSlot {
  std::size_t start;
  std::size_t length;
  std::vector<ColumnChoice> columns;
  std::vector<OpChoice> ops;
};

struct AggChoice {
  Agg agg;
  bool cued;
  std::string note;
};

inline bool in_list(const std::vector<std::string>& list, const std::string& word) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

inline std::vector<ConditionSlot> condition_slots(std::span<const std::string> question,
                                                  std::span<const MatchSpan> spans, const DecoderConfig& cfg) {
  // Group cell matches by question span, keeping first-seen (row-major) order.
  std::vector<ConditionSlot> groups;
  for (const auto& s : spans) {
    if (s.kind != MatchSpan::Kind::Cell) continue;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const ConditionSlot& g) { return g.start == s.start && g.length == s.length; });
    if (it == groups.end()) {
      groups.push_back({s.start, s.length, {}, {}});
      it = std::prev(groups.end());
    }
    bool seen = std::any_of(it->columns.begin(), it->columns.end(), [&](const auto& c) { return c.col == s.col; });
    if (!seen && it->columns.size() < cfg.max_column_choices) it->columns.push_back({s.row, s.col});
  }

  // Overlapping spans: the longer one wins, then the earlier one.
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (groups[a].length != groups[b].length) return groups[a].length > groups[b].length;
    return groups[a].start < groups[b].start;
  });
  std::vector<ConditionSlot> kept;
  for (std::size_t i : order) {
    const auto& g = groups[i];
    bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const ConditionSlot& k) {
      return g.start < k.start + k.length && k.start < g.start + g.length;
    });
    if (!overlaps) kept.push_back(g);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  if (kept.size() > cfg.max_conditions) kept.resize(cfg.max_conditions);

  for (auto& slot : kept) {
    slot.ops.push_back({Op::Eq, false, ""});
    const bool numeric = slot.length == 1 && parse_number(question[slot.start]).has_value();
    if (!numeric || slot.start == 0) continue;
    std::size_t cue_at = slot.start - 1;
    if (question[cue_at] == "than" && cue_at > 0) --cue_at;
    const std::string& cue = question[cue_at];
    std::optional<Op> cued;
    if (in_list(cfg.greater_cues, cue)) cued = Op::Gt;
    if (in_list(cfg.less_cues, cue)) cued = Op::Lt;
    if (!cued) continue;
    std::string note = "cue '" + cue + "' at token " + std::to_string(cue_at);
    slot.ops.front() = {*cued, true, note};
    slot.ops.push_back({Op::Eq, false, ""});
    slot.ops.push_back({*cued == Op::Gt ? Op::Lt : Op::Gt, false, ""});
  }
  return kept;
}

inline std::vector<AggChoice> agg_choices(std::span<const std::string> question, const DecoderConfig& cfg) {
  std::vector<AggChoice> out;
  const auto& prefix = cfg.count_prefix;
  if (!prefix.empty() && question.size() >= prefix.size() &&
      std::equal(prefix.begin(), prefix.end(), question.begin())) {
    out.push_back({Agg::Count, true, "prefix '" + join_tokens(prefix) + "'"});
  }
  auto find_cue = [&](const std::vector<std::string>& cues) -> const std::string* {
    for (const auto& tok : question) {
      if (in_list(cues, tok)) return &tok;
    }
    return nullptr;
  };
  if (const auto* cue = find_cue(cfg.max_cues)) out.push_back({Agg::Max, true, "cue '" + *cue + "'"});
  if (const auto* cue = find_cue(cfg.min_cues)) out.push_back({Agg::Min, true, "cue '" + *cue + "'"});
  out.push_back({Agg::None, false, "no cue"});
  return out;
}

// Columns tagged "header in question", ordered by where the header name
// occurs in the question, then by column index.
inline std::vector<std::size_t> header_priority(const HeaderMarkVector& hv, std::span<const MatchSpan> spans) {
  std::map<std::size_t, std::size_t> first_pos;
  for (const auto& s : spans) {
    if (s.kind == MatchSpan::Kind::Header && !first_pos.count(s.col)) first_pos[s.col] = s.start;
  }
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < hv.values.size(); ++c) {
    if (hv.values[c] == kHeaderInQuestion) cols.push_back(c);
  }
  auto pos = [&](std::size_t c) {
    auto it = first_pos.find(c);
    return it == first_pos.end() ? std::numeric_limits<std::size_t>::max() : it->second;
  };
  std::stable_sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) { return pos(a) < pos(b); });
  return cols;
}

inline std::string sort_key(const SqlQuery& sql) { return sql_to_json(sql).dump(); }

}  // namespace detail

/// Ranked candidates for one question, best first, at most `cfg.beam` of
/// them. A question with no span and no header mark gets the single default
/// query (column 0, no aggregate, no conditions) with score 0.
inline std::vector<Candidate> decode(const Example& example, const Table& table, const QuestionMarkVector& qv,
                                     const HeaderMarkVector& hv, std::span<const MatchSpan> spans,
                                     const DecoderConfig& cfg = {}) {
  const auto& question = example.question_tokens;
  if (qv.values.size() != question.size()) throw std::invalid_argument("question mark vector length mismatch");
  if (hv.values.size() != table.num_columns()) throw std::invalid_argument("header mark vector length mismatch");
  if (cfg.beam == 0) throw std::invalid_argument("beam must be at least 1");

  const bool any_header = std::any_of(hv.values.begin(), hv.values.end(), [](auto v) { return v != 0; });
  if (spans.empty() && !any_header) {
    Candidate c;
    c.provenance = {"default column 0", "no match", {}};
    return {c};
  }

  const auto slots = detail::condition_slots(question, spans, cfg);
  const auto aggs = detail::agg_choices(question, cfg);
  const auto headers = detail::header_priority(hv, spans);

  std::vector<Candidate> all;
  std::vector<std::size_t> col_pick(slots.size(), 0), op_pick(slots.size(), 0);

  auto emit = [&] {
    SqlQuery base;
    Provenance prov;
    int cond_cues = 0;
    std::vector<bool> consumed(table.num_columns(), false);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& slot = slots[i];
      const auto& choice = slot.columns[col_pick[i]];
      const auto& op = slot.ops[op_pick[i]];
      base.conds.push_back({choice.col, op.op, table.rows[choice.row][choice.col].raw});
      consumed[choice.col] = true;
      cond_cues += op.cued;
      std::string note = "cell r" + std::to_string(choice.row) + "c" + std::to_string(choice.col) + " at tokens [" +
                         std::to_string(slot.start) + "," + std::to_string(slot.start + slot.length) + ")";
      if (op.cued) note += ", op from " + op.note;
      prov.conds.push_back(std::move(note));
    }

    std::vector<std::pair<std::size_t, bool>> sels;
    for (std::size_t c : headers) {
      if (!consumed[c]) sels.emplace_back(c, true);
    }
    if (sels.empty()) sels.emplace_back(0, false);

    for (const auto& [sel, from_header] : sels) {
      for (const auto& agg : aggs) {
        Candidate cand;
        cand.sql = base;
        cand.sql.sel = sel;
        cand.sql.agg = agg.agg;
        int cues = cond_cues + agg.cued;
        const bool numeric_agg = agg.agg == Agg::Max || agg.agg == Agg::Min;
        if (numeric_agg && table.types[sel] == ColumnKind::Real) ++cues;
        cand.score = cfg.span_weight * static_cast<int>(base.conds.size()) + cfg.header_weight * from_header +
                     cfg.cue_weight * cues;
        cand.provenance = prov;
        cand.provenance.sel = from_header ? "header '" + table.header[sel] + "'" : "default column 0";
        cand.provenance.agg = agg.note;
        all.push_back(std::move(cand));
      }
    }
  };

  // Odometer over (column choice, op choice) for every condition slot.
  while (true) {
    emit();
    std::size_t i = 0;
    for (; i < slots.size(); ++i) {
      if (++op_pick[i] < slots[i].ops.size()) break;
      op_pick[i] = 0;
      if (++col_pick[i] < slots[i].columns.size()) break;
      col_pick[i] = 0;
    }
    if (i == slots.size()) break;
  }

  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) keys.emplace_back(detail::sort_key(all[i].sql), i);
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = all[a].sql;
    const auto& y = all[b].sql;
    if (all[a].score != all[b].score) return all[a].score > all[b].score;
    if (x.sel != y.sel) return x.sel < y.sel;
    if (x.conds.size() != y.conds.size()) return x.conds.size() < y.conds.size();
    return keys[a].first < keys[b].first;
  });

  std::vector<Candidate> ranked;
  std::string last;
  for (std::size_t i : order) {
    if (!ranked.empty() && keys[i].first == last) continue;
    last = keys[i].first;
    ranked.push_back(std::move(all[i]));
    if (ranked.size() == cfg.beam) break;
  }
  return ranked;
}

/// Execution-guided selection: the index of the first candidate that runs
/// without error and returns a non-empty result, or 0 if none does.
inline std::size_t eg_select(std::span<const Candidate> candidates, const Table& table) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to filter");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    try {
      if (!execute(candidates[i].sql, table).is_empty()) return i;
    } catch (const ExecError&) {
    }
  }
  return 0;
}

inline const Candidate& eg_filter(std::span<const Candidate> candidates, const Table& table) {
  return candidates[eg_select(candidates, table)];
}

/// Overrides config fields from a JSON cue file. Recognized keys: greater,
/// less, max, min, count_prefix (string arrays) and beam.
inline DecoderConfig load_decoder_config(std::istream& in, DecoderConfig base = {},
                                         std::string_view source = "<cues>") {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string(source) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw DataError(std::string(source) + ": expected a JSON object");
  auto words = [&](const char* key, std::vector<std::string>& dst) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array()) throw DataError(std::string(source) + ": '" + key + "' must be an array of strings");
    std::vector<std::string> list;
    for (const auto& w : *it) {
      if (!w.is_string()) throw DataError(std::string(source) + ": '" + key + "' must be an array of strings");
      Tokens t = tokenize(w.get<std::string>());
      list.insert(list.end(), t.begin(), t.end());
    }
    dst = std::move(list);
  };
  words("greater", base.greater_cues);
  words("less", base.less_cues);
  words("max", base.max_cues);
  words("min", base.min_cues);
  words("count_prefix", base.count_prefix);
  if (auto it = j.find("beam"); it != j.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) {
      throw DataError(std::string(source) + ": 'beam' must be a positive integer");
    }
    base.beam = it->get<std::size_t>();
  }
  return base;
}

}  // namespace tablemark

#endif  // TABLEMARK_DECODER_HPP
