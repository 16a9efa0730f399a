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

#include <iostream>

#include "CLI11.hpp"
#include "tablemark/cli.hpp"

int main(int argc, char** argv) {
  using namespace tablemark;

  CLI::App app{"tablemark: table-content mark vectors, WikiSQL execution and evaluation"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_data = [&](CLI::App* sub, bool need_examples) {
    auto* t = sub->add_option("--tables", cfg.tables_path, "Tables JSONL (id, header, types, rows)");
    t->required();
    if (need_examples) {
      sub->add_option("--examples", cfg.examples_path, "Examples JSONL (question, table_id, sql)")->required();
    }
  };
  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", cfg.jobs, "Worker threads; output order never depends on it")
        ->default_val(1)
        ->check(CLI::PositiveNumber);
  };

  auto* encode = app.add_subcommand("encode", "Write question/header mark vectors and match spans as JSONL");
  add_data(encode, true);
  encode->add_option("--out", cfg.out_path, "Output JSONL (default: standard output)");
  add_jobs(encode);

  auto* decode = app.add_subcommand("decode", "Decode questions into predicted logical forms (prediction JSONL)");
  add_data(decode, true);
  decode->add_option("--out", cfg.out_path, "Output prediction JSONL (default: standard output)");
  decode->add_flag("--eg", cfg.eg, "Execution-guided selection: skip candidates that fail or return nothing");
  decode->add_option("--beam", cfg.beam, "Candidates kept per question")->default_val(8)->check(CLI::PositiveNumber);
  decode->add_option("--cues", cfg.cues_path, "JSON cue-word overrides (greater, less, max, min, count_prefix)");
  decode->add_flag("--no-spans", cfg.no_spans, "Withhold match spans and the question vector (ablation)");
  add_jobs(decode);

  auto* eval = app.add_subcommand("eval", "Score predictions: logic form, execution and per-slot accuracy");
  add_data(eval, true);
  eval->add_option("--predictions", cfg.predictions_path, "Prediction JSONL ({idx, sql})")->required();
  eval->add_option("--out", cfg.out_path, "Report JSON path (the table always goes to standard output)");
  eval->add_option("--tolerance", cfg.tolerance, "Relative tolerance for scalar results")->default_val(1e-6);
  bool both_errors_mismatch = false;
  eval->add_flag("--both-errors-mismatch", both_errors_mismatch,
                 "Count a pair where both queries fail to execute as an execution mismatch");

  auto* exec = app.add_subcommand("exec", "Execute one logical form against a table and print the result");
  add_data(exec, false);
  exec->add_option("--table-id", cfg.table_id, "Table id")->required();
  exec->add_option("--sql", cfg.sql_json, R"(Logical form, e.g. '{"sel":1,"agg":3,"conds":[[0,0,"ann"]]}')")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  cfg.both_errors_match = !both_errors_mismatch;

  if (encode->parsed()) return cmd_encode(cfg, std::cout, std::cerr);
  if (decode->parsed()) return cmd_decode(cfg, std::cout, std::cerr);
  if (eval->parsed()) return cmd_eval(cfg, std::cout, std::cerr);
  if (exec->parsed()) return cmd_exec(cfg, std::cout, std::cerr);
  return kExitInput;
}
