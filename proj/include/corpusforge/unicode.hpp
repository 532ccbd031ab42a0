// Copyright 2026 The CorpusForge Authors.
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

// Minimal UTF-8 and character-class support. The class tables cover the
// scripts the toolkit is used with (Latin, Greek, Cyrillic and the common
// punctuation blocks); they are not a full Unicode database.

#ifndef CORPUSFORGE_UNICODE_HPP_
#define CORPUSFORGE_UNICODE_HPP_

#include <cstddef>
#include <string>
#include <string_view>

namespace corpusforge::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

bool valid(std::string_view s);

// Decodes the code point starting at `pos` and advances past it. Invalid or
// truncated sequences yield kReplacement and advance by one byte.
char32_t decode(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

std::u32string to_u32(std::string_view s);
std::string from_u32(std::u32string_view s);

// Number of code points.
std::size_t length(std::string_view s);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
inline bool is_alnum(char32_t cp) { return is_letter(cp) || is_digit(cp); }
// Unicode general category P* (approximated by a range table).
bool is_punct(char32_t cp);
bool is_space(char32_t cp);

char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);

std::string lower(std::string_view s);
// Uppercases the first code point only.
std::string upper_first(std::string_view s);

}  // namespace corpusforge::utf8

#endif  // CORPUSFORGE_UNICODE_HPP_
