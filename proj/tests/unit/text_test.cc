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

#include "augwork/text.h"

#include <string>

#include <gtest/gtest.h>

namespace augwork::text {
namespace {

TEST(Utf8, Validity) {
  EXPECT_TRUE(is_valid_utf8("plain"));
  EXPECT_TRUE(is_valid_utf8("caf\xc3\xa9 \xe2\x80\x99 \xf0\x9f\x98\x80"));
  EXPECT_FALSE(is_valid_utf8("\xff"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));
  EXPECT_FALSE(is_valid_utf8("\xed\xa0\x80"));
}

TEST(Utf8, DecodeAndAppendRoundTrip) {
  const std::string s = "a\xc3\xa9\xe2\x80\x94\xf0\x9f\x98\x80";
  std::string out;
  std::size_t pos = 0;
  int n = 0;
  while (pos < s.size()) {
    append_utf8(out, decode_next(s, pos));
    ++n;
  }
  EXPECT_EQ(out, s);
  EXPECT_EQ(n, 4);
  std::size_t p = 0;
  EXPECT_EQ(decode_next("\xff", p), kReplacementChar);
  EXPECT_EQ(p, 1u);
}

TEST(Case, LowerAndInitialCase) {
  EXPECT_EQ(lower("ÄRGER Über ΑΘΉΝΑ"), "ärger über αθήνα");
  EXPECT_EQ(match_initial_case("Happy", "glad"), "Glad");
  EXPECT_EQ(match_initial_case("happy", "Glad"), "glad");
  EXPECT_EQ(match_initial_case("Élan", "ésprit"), "Ésprit");
  EXPECT_TRUE(is_upper(U'Ö'));
  EXPECT_FALSE(is_upper(U'ö'));
}

TEST(Classes, LettersDigitsApostrophes) {
  EXPECT_TRUE(is_letter(U'a'));
  EXPECT_TRUE(is_letter(U'ß'));
  EXPECT_TRUE(is_letter(U'ж'));
  EXPECT_FALSE(is_letter(U'—'));
  EXPECT_FALSE(is_letter(U'“'));
  EXPECT_FALSE(is_letter(U'5'));
  EXPECT_TRUE(is_digit(U'5'));
  EXPECT_TRUE(is_apostrophe(U'\''));
  EXPECT_TRUE(is_apostrophe(U'’'));
  EXPECT_TRUE(is_whitespace(U'\t'));
  EXPECT_TRUE(is_whitespace(0xA0));
}

TEST(Normalize, TrimAndDedup) {
  EXPECT_EQ(trim("  a b \n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(normalize_for_dedup("  The   Cat\tSat "), "the cat sat");
}

}  // namespace
}  // namespace augwork::text
