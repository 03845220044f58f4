//
// Copyright 2026 The augwork Authors
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
//

#ifndef AUGWORK_TEXT_H_
#define AUGWORK_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>

// Small UTF-8 helpers shared by the tokenizer, the segmenter and the
// augmenters. Case mapping covers ASCII, Latin-1, Latin Extended-A, Greek
// and Cyrillic; other scripts pass through unchanged.
namespace augwork::text {

inline constexpr char32_t kReplacementChar = 0xFFFD;

bool is_valid_utf8(std::string_view s);

// Decodes the code point starting at s[pos] and advances pos. Invalid
// sequences decode to U+FFFD and consume one byte.
char32_t decode_next(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);
bool is_digit(char32_t cp);
bool is_apostrophe(char32_t cp);
// Letters and other word-forming characters. Non-ASCII code points count as
// letters unless they fall in a punctuation, symbol or space block.
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);

char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);

std::string lower(std::string_view s);

// Strips leading and trailing whitespace.
std::string_view trim(std::string_view s);

// Lowercases and collapses whitespace runs to one space; used for duplicate
// detection of generated text.
std::string normalize_for_dedup(std::string_view s);

// Returns replacement with its first letter upper- or lower-cased to match
// the first letter of original.
std::string match_initial_case(std::string_view original,
                               std::string_view replacement);

}  // namespace augwork::text

#endif  // AUGWORK_TEXT_H_
