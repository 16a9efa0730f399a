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

// Decodes one question with the baseline decoder and executes each ranked
// candidate, showing which one execution-guided selection would keep.
//
//   decode_question "How many players are on the Raptors?"

#include <iostream>
#include <string>

#include "tablemark/tablemark.hpp"

int main(int argc, char** argv) {
  using namespace tablemark;
  Example ex;
  ex.question_raw = argc > 1 ? argv[1] : "What is the highest points for the Raptors?";
  ex.question_tokens = tokenize(ex.question_raw);

  const Table table = make_table("players", {"Player", "Team", "Points"},
                                 {ColumnKind::Text, ColumnKind::Text, ColumnKind::Real},
                                 {{"Terrence Ross", "Raptors", "15"},
                                  {"Ann Lee", "Hawks", "22"},
                                  {"Bo Diaz", "Raptors", "9"}});
  const auto enc = build_question_vector(ex.question_tokens, table);
  const auto hv = build_header_vector(ex.question_tokens, table);
  const auto spans = find_matches(ex.question_tokens, table);
  const auto candidates = decode(ex, table, enc.qv, hv, spans);

  const std::size_t pick = eg_select(candidates, table);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    std::cout << (i == pick ? "* " : "  ") << c.score << "  " << sql_to_json(c.sql).dump() << "  -> ";
    try {
      std::cout << result_to_json(execute(c.sql, table)).dump() << '\n';
    } catch (const ExecError& e) {
      std::cout << e.what() << '\n';
    }
  }
  return 0;
}
