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

// Prints the question and header mark vectors for a question against a
// small hard-coded table, aligned under the tokens.
//
//   mark_vectors "What team does Terrence Ross play for?"

#include <iomanip>
#include <iostream>
#include <string>

#include "tablemark/matching.hpp"

int main(int argc, char** argv) {
  using namespace tablemark;
  const std::string text = argc > 1 ? argv[1] : "What team does Terrence Ross play for?";

  const Table table = make_table("players", {"Player", "Team", "Points"},
                                 {ColumnKind::Text, ColumnKind::Text, ColumnKind::Real},
                                 {{"Terrence Ross", "Raptors", "15"}, {"Ann Lee", "Hawks", "22"}});
  const Tokens question = tokenize(text);
  const auto enc = build_question_vector(question, table);
  const auto hv = build_header_vector(question, table);

  std::cout << "question:\n";
  for (std::size_t i = 0; i < question.size(); ++i) {
    std::cout << "  " << std::setw(12) << std::left << question[i] << int(enc.qv.values[i]) << '\n';
  }
  std::cout << "header:\n";
  for (std::size_t c = 0; c < table.num_columns(); ++c) {
    std::cout << "  " << std::setw(12) << std::left << table.header[c] << int(hv.values[c]) << '\n';
  }
  for (const auto& s : find_matches(question, table)) std::cout << span_to_json(s).dump() << '\n';
  return 0;
}
