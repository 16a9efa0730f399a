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

#ifndef TABLEMARK_TOKENIZE_HPP
#define TABLEMARK_TOKENIZE_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace tablemark {

using Tokens = std::vector<std::string>;

namespace detail {

inline bool is_ascii(std::string_view text) {
  for (unsigned char c : text) {
    if (c >= 0x80) return false;
  }
  return true;
}

inline bool is_ascii_space(unsigned char c) {
  return c == ' ' || (c >= '\t' && c <= '\r');
}

// ASCII punctuation according to the Unicode P* categories, so the fast path
// and the ICU path strip exactly the same characters.
inline const std::array<bool, 128>& ascii_punct_table() {
  static const std::array<bool, 128> table = [] {
    std::array<bool, 128> t{};
    for (UChar32 c = 0; c < 128; ++c) t[static_cast<std::size_t>(c)] = u_ispunct(c) != 0;
    return t;
  }();
  return table;
}

inline void push_stripped_ascii(std::string_view word, Tokens& out) {
  const auto& punct = ascii_punct_table();
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end && punct[static_cast<unsigned char>(word[begin])]) ++begin;
  while (end > begin && punct[static_cast<unsigned char>(word[end - 1])]) --end;
  if (begin == end) return;
  std::string token(word.substr(begin, end - begin));
  for (char& c : token) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  out.push_back(std::move(token));
}

inline Tokens tokenize_ascii(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) push_stripped_ascii(text.substr(start, i - start), out);
  }
  return out;
}

inline icu::UnicodeString nfkc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) return s;
  icu::UnicodeString out = normalizer->normalize(s, status);
  return U_FAILURE(status) ? s : out;
}

inline void push_stripped_unicode(const icu::UnicodeString& word, Tokens& out) {
  int32_t begin = 0;
  int32_t end = word.length();
  while (begin < end) {
    UChar32 c = word.char32At(begin);
    if (!u_ispunct(c)) break;
    begin += U16_LENGTH(c);
  }
  while (end > begin) {
    int32_t last = word.moveIndex32(end, -1);
    if (!u_ispunct(word.char32At(last))) break;
    end = last;
  }
  if (begin == end) return;
  std::string token;
  word.tempSubStringBetween(begin, end).toUTF8String(token);
  out.push_back(std::move(token));
}

inline Tokens tokenize_unicode(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s = nfkc(s);
  s.toLower(icu::Locale::getRoot());
  s = nfkc(s);

  Tokens out;
  int32_t i = 0;
  const int32_t n = s.length();
  while (i < n) {
    while (i < n && u_isUWhiteSpace(s.char32At(i))) i = s.moveIndex32(i, 1);
    int32_t start = i;
    while (i < n && !u_isUWhiteSpace(s.char32At(i))) i = s.moveIndex32(i, 1);
    if (i > start) push_stripped_unicode(s.tempSubStringBetween(start, i), out);
  }
  return out;
}

inline std::optional<double> parse_plain_number(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_ascii_space(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && is_ascii_space(static_cast<unsigned char>(text[end - 1]))) --end;
  if (begin == end) return std::nullopt;
  double value = 0.0;
  const char* first = text.data() + begin;
  const char* last = text.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace detail

/// Splits text into lowercase word tokens.
///
/// The text is NFKC-normalized and lowercased, split on Unicode whitespace,
/// and each word loses its leading and trailing punctuation (categories P*).
/// Words that are all punctuation are dropped. Interior punctuation such as
/// hyphens and decimal points survives.
inline Tokens tokenize(std::string_view text) {
  return detail::is_ascii(text) ? detail::tokenize_ascii(text) : detail::tokenize_unicode(text);
}

inline std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

/// Parses a cell or condition value as a finite decimal.
///
/// Accepts the trimmed raw text, or failing that, a value whose normalized
/// form is a single numeric token ("3%" and "(3)" both read as 3).
inline std::optional<double> parse_number(std::string_view text) {
  if (auto v = detail::parse_plain_number(text)) return v;
  Tokens tokens = tokenize(text);
  if (tokens.size() != 1) return std::nullopt;
  return detail::parse_plain_number(tokens.front());
}

/// Shortest round-trip decimal spelling of a number; -0 prints as 0.
inline std::string canonical_number(double value) {
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

/// Comparison key shared by condition equality, result comparison and
/// logical-form matching: the canonical number when the text is numeric,
/// otherwise the space-joined normalized tokens.
inline std::string value_key(std::string_view text) {
  if (auto v = parse_number(text)) return canonical_number(*v);
  return join_tokens(tokenize(text));
}

}  // namespace tablemark

#endif  // TABLEMARK_TOKENIZE_HPP
