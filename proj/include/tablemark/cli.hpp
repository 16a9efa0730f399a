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

// Batch commands behind the `tablemark` tool. Argument parsing lives in the
// tool; these functions take a filled RunConfig so they can be driven from
// tests as well.
//
// Exit codes: 0 success, 1 input or configuration error, 2 execution error.
// Artifacts go to --out (or `out` when no path is given); summaries and
// diagnostics go to `err`.

#ifndef TABLEMARK_CLI_HPP
#define TABLEMARK_CLI_HPP

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tablemark/data.hpp"
#include "tablemark/decoder.hpp"
#include "tablemark/eval.hpp"
#include "tablemark/exec.hpp"
#include "tablemark/matching.hpp"

namespace tablemark {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitExec = 2 };

struct RunConfig {
  std::string examples_path;
  std::string tables_path;
  std::string predictions_path;
  std::string out_path;
  std::string cues_path;
  std::string table_id;
  std::string sql_json;
  bool eg = false;
  bool no_spans = false;
  bool both_errors_match = true;
  std::size_t beam = 8;
  std::size_t jobs = 1;
  double tolerance = kDefaultRelTolerance;
};

/// Computes `fn(i)` for i in [0, count) on up to `jobs` threads and returns
/// the results in index order. The first failure (by index) is rethrown.
template <typename Fn>
std::vector<std::string> parallel_map(std::size_t count, std::size_t jobs, Fn&& fn) {
  std::vector<std::string> out(count);
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  const std::size_t chunk = (count + jobs - 1) / jobs;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace detail {

inline void require_file(const std::string& path, std::string_view flag) {
  if (path.empty()) throw DataError("missing required option " + std::string(flag));
  if (!std::filesystem::is_regular_file(path)) {
    throw DataError(std::string(flag) + " file '" + path + "' does not exist");
  }
}

// Writes lines to cfg.out_path, or to `fallback` when no path is set.
inline void write_lines(const RunConfig& cfg, std::ostream& fallback, const std::vector<std::string>& lines) {
  auto emit = [&](std::ostream& os) {
    for (const auto& l : lines) os << l << '\n';
  };
  if (cfg.out_path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write '" + cfg.out_path + "'");
  emit(file);
  if (!file.flush()) throw DataError("error writing '" + cfg.out_path + "'");
}

inline std::string percent(std::size_t part, std::size_t whole) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << (whole ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0)
     << "%";
  return os.str();
}

inline int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ExecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitExec;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace detail

/// Writes one mark-vector record per example.
inline int cmd_encode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    detail::require_file(cfg.tables_path, "--tables");
    detail::require_file(cfg.examples_path, "--examples");
    const TableMap tables = load_tables(cfg.tables_path);
    const std::vector<Example> examples = load_examples(cfg.examples_path, tables);

    std::vector<std::uint8_t> cell_hit(examples.size()), header_hit(examples.size());
    auto lines = parallel_map(examples.size(), cfg.jobs, [&](std::size_t i) {
      EncodedExample e = encode_example(i, examples[i], tables);
      for (const auto& s : e.spans) {
        (s.kind == MatchSpan::Kind::Cell ? cell_hit : header_hit)[i] = 1;
      }
      return encoded_to_json(e).dump();
    });
    detail::write_lines(cfg, out, lines);

    const auto n = examples.size();
    const auto cells = static_cast<std::size_t>(std::count(cell_hit.begin(), cell_hit.end(), 1));
    const auto headers = static_cast<std::size_t>(std::count(header_hit.begin(), header_hit.end(), 1));
    err << n << " examples, " << detail::percent(cells, n) << " with a cell match, " << detail::percent(headers, n)
        << " with a header match\n";
    return kExitOk;
  });
}

/// Decodes every example and writes prediction JSONL.
inline int cmd_decode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    detail::require_file(cfg.tables_path, "--tables");
    detail::require_file(cfg.examples_path, "--examples");
    DecoderConfig dcfg;
    if (!cfg.cues_path.empty()) {
      detail::require_file(cfg.cues_path, "--cues");
      std::ifstream in(cfg.cues_path);
      dcfg = load_decoder_config(in, dcfg, cfg.cues_path);
    }
    if (cfg.beam == 0) throw DataError("--beam must be at least 1");
    dcfg.beam = cfg.beam;

    const TableMap tables = load_tables(cfg.tables_path);
    const std::vector<Example> examples = load_examples(cfg.examples_path, tables);

    std::vector<std::uint8_t> moved(examples.size());
    auto lines = parallel_map(examples.size(), cfg.jobs, [&](std::size_t i) {
      const Example& ex = examples[i];
      const Table& table = table_for(ex, tables);
      EncodedExample enc = encode_example(i, ex, tables);
      if (cfg.no_spans) {
        std::fill(enc.qv.values.begin(), enc.qv.values.end(), kNoMark);
        enc.spans.clear();
      }
      auto candidates = decode(ex, table, enc.qv, enc.hv, enc.spans, dcfg);
      std::size_t pick = cfg.eg ? eg_select(candidates, table) : 0;
      moved[i] = pick != 0;
      return prediction_to_json({i, candidates[pick].sql}).dump();
    });
    detail::write_lines(cfg, out, lines);

    err << examples.size() << " examples decoded (beam " << dcfg.beam << ", eg " << (cfg.eg ? "on" : "off");
    if (cfg.eg) err << ", " << std::count(moved.begin(), moved.end(), 1) << " changed by eg";
    err << ")\n";
    return kExitOk;
  });
}

/// Fixed-width accuracy table: overall metrics, then one column per slot.
inline void print_report_table(const EvalReport& r, std::ostream& os) {
  auto fmt = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
  };
  os << "examples        " << r.n << '\n';
  os << "logic form acc  " << fmt(r.lf_acc) << '\n';
  os << "execution acc   " << fmt(r.ex_acc) << '\n';
  for (std::size_t k = 0; k < kSlotTitles.size(); ++k) os << (k ? "  " : "") << kSlotTitles[k];
  os << '\n';
  for (std::size_t k = 0; k < kSlotTitles.size(); ++k) {
    os << (k ? "  " : "") << std::setw(static_cast<int>(kSlotTitles[k].size())) << fmt(r.slot_acc[k]);
  }
  os << '\n';
}

/// Scores a prediction file; the report JSON goes to --out when given and
/// the accuracy table always goes to `out`.
inline int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    detail::require_file(cfg.tables_path, "--tables");
    detail::require_file(cfg.examples_path, "--examples");
    detail::require_file(cfg.predictions_path, "--predictions");
    if (!(cfg.tolerance >= 0.0)) throw DataError("--tolerance must be non-negative");
    const TableMap tables = load_tables(cfg.tables_path);
    const std::vector<Example> examples = load_examples(cfg.examples_path, tables);
    const std::vector<Prediction> preds = load_predictions(cfg.predictions_path);

    EvalOptions opts;
    opts.rel_tol = cfg.tolerance;
    opts.both_errors_match = cfg.both_errors_match;
    const EvalReport report = evaluate(preds, examples, tables, opts);
    if (!cfg.out_path.empty()) {
      std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw DataError("cannot write '" + cfg.out_path + "'");
      file << report_to_json(report).dump(2) << '\n';
    }
    print_report_table(report, out);
    return kExitOk;
  });
}

/// Executes one logical form (JSON `{"sel":..,"agg":..,"conds":[..]}`)
/// against a table and prints the result as JSON.
inline int cmd_exec(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    detail::require_file(cfg.tables_path, "--tables");
    if (cfg.table_id.empty()) throw DataError("missing required option --table-id");
    const TableMap tables = load_tables(cfg.tables_path);
    auto it = tables.find(cfg.table_id);
    if (it == tables.end()) throw DataError("table '" + cfg.table_id + "' not found in '" + cfg.tables_path + "'");
    Json j;
    try {
      j = Json::parse(cfg.sql_json);
    } catch (const Json::parse_error& e) {
      throw DataError(std::string("--sql: malformed JSON: ") + e.what());
    }
    const SqlQuery sql = parse_sql(j, "--sql: ");
    out << result_to_json(execute(sql, it->second)).dump() << '\n';
    return kExitOk;
  });
}

}  // namespace tablemark

#endif  // TABLEMARK_CLI_HPP
