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

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "tablemark/tokenize.hpp"

namespace tablemark {
namespace {

TEST(TokenizeTest, EmptyInput) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   \t\n").empty());
}

TEST(TokenizeTest, QuestionWithPossessive) {
  // The trailing apostrophe is punctuation at the end of the word, so it is
  // stripped like the question mark.
  EXPECT_EQ(tokenize("What is Terrence Ross' nationality?"),
            (Tokens{"what", "is", "terrence", "ross", "nationality"}));
}

TEST(TokenizeTest, InteriorPunctuationSurvives) {
  EXPECT_EQ(tokenize("3.5 points"), (Tokens{"3.5", "points"}));
  EXPECT_EQ(tokenize("(well-known), \"x\"!"), (Tokens{"well-known", "x"}));
  EXPECT_EQ(tokenize("O'Neal's"), (Tokens{"o'neal's"}));
}

TEST(TokenizeTest, AllPunctuationWordsAreDropped) {
  EXPECT_EQ(tokenize("a -- b ... c ?"), (Tokens{"a", "b", "c"}));
}

TEST(TokenizeTest, SymbolsAreNotPunctuation) {
  EXPECT_EQ(tokenize("$5 +3"), (Tokens{"$5", "+3"}));
}

TEST(TokenizeTest, UnicodeCompatibilityFormAndCase) {
  // Full-width letters and digits fold to ASCII, the ligature expands, and
  // the no-break space splits words.
  EXPECT_EQ(tokenize("\xEF\xBC\xA1\xEF\xBC\xA2\xEF\xBC\x91"), (Tokens{"ab1"}));
  EXPECT_EQ(tokenize("\xEF\xAC\x81ne"), (Tokens{"fine"}));
  EXPECT_EQ(tokenize("a\xC2\xA0" "b"), (Tokens{"a", "b"}));
  EXPECT_EQ(tokenize("\xC3\x89" "COLE"), (Tokens{"\xC3\xA9" "cole"}));
  // Guillemets and the inverted question mark are punctuation.
  EXPECT_EQ(tokenize("\xC2\xBF" "Qu\xC3\xA9?"), (Tokens{"qu\xC3\xA9"}));
  EXPECT_EQ(tokenize("\xC2\xAB" "hola\xC2\xBB"), (Tokens{"hola"}));
}

TEST(TokenizeTest, InvalidUtf8DoesNotThrow) {
  EXPECT_NO_THROW(tokenize("ab\xFF\xFE" "cd"));
}

TEST(TokenizeTest, IdempotentOnJoinedOutput) {
  std::mt19937 rng(7);
  const std::string alphabet[] = {"a", "B", " ", "?", "'", "-", ".", "3", "\xC3\x89", "\xEF\xBC\xA1",
                                  "\xC2\xA0", "\xC2\xBF", "\xEF\xAC\x81", ",", "\t", "z"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(alphabet) - 1);
  std::uniform_int_distribution<std::size_t> len(0, 20);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (std::size_t k = len(rng); k > 0; --k) s += alphabet[pick(rng)];
    Tokens once = tokenize(s);
    ASSERT_EQ(tokenize(join_tokens(once)), once) << "input: " << s;
  }
}

TEST(ParseNumberTest, PlainAndNormalizedForms) {
  EXPECT_EQ(parse_number("3"), 3.0);
  EXPECT_EQ(parse_number(" 3.0 "), 3.0);
  EXPECT_EQ(parse_number("-2.5"), -2.5);
  EXPECT_EQ(parse_number("1e3"), 1000.0);
  EXPECT_EQ(parse_number("(3)"), 3.0);
  EXPECT_EQ(parse_number("40%"), 40.0);
  EXPECT_FALSE(parse_number("abc"));
  EXPECT_FALSE(parse_number("12 (3)"));
  EXPECT_FALSE(parse_number("1,000"));
  EXPECT_FALSE(parse_number("inf"));
  EXPECT_FALSE(parse_number("nan"));
  EXPECT_FALSE(parse_number(""));
}

TEST(ValueKeyTest, NumbersCanonicalizeAndTextNormalizes) {
  EXPECT_EQ(value_key("3"), value_key("3.0"));
  EXPECT_EQ(value_key("3"), "3");
  EXPECT_EQ(value_key("-0"), "0");
  EXPECT_EQ(value_key("Terrence  Ross!"), "terrence ross");
  EXPECT_NE(value_key("3"), value_key("three"));
}

TEST(ValueKeyTest, NumericnessIsAFunctionOfTheKey) {
  for (const char* s : {"3", "3.50", "(3)", "abc", "12 (3)", "-7", "1e-3", "x1"}) {
    EXPECT_EQ(parse_number(s).has_value(), parse_number(value_key(s)).has_value()) << s;
    EXPECT_EQ(value_key(value_key(s)), value_key(s)) << s;
  }
}

}  // namespace
}  // namespace tablemark
