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

#include "augwork/nounlex.h"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "augwork/rng.h"
#include "test_util.h"

namespace augwork::nounlex {
namespace {

using augwork::testing::fixture_path;
using augwork::testing::read_lines;

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

TEST(Tokenize, Basics) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("Police contact, again."),
            (std::vector<std::string>{"Police", "contact", "again"}));
  EXPECT_EQ(tokenize("don't stop—it’s 24/7 café"),
            (std::vector<std::string>{"don't", "stop", "it’s", "24", "7", "café"}));
  EXPECT_EQ(tokenize("...!!"), std::vector<std::string>{});
}

TEST(Tokenize, MatchesReferenceOnThousandDocs) {
  const auto docs = read_lines(fixture_path("tokenize_docs.txt"));
  const auto ref = read_lines(fixture_path("tokenize_reference.tsv"));
  ASSERT_EQ(docs.size(), 1000u);
  ASSERT_EQ(ref.size(), docs.size());
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto tab1 = ref[i].find('\t');
    const auto tab2 = ref[i].find('\t', tab1 + 1);
    const std::size_t count = std::stoul(ref[i].substr(tab1 + 1, tab2 - tab1 - 1));
    const auto expected = split_ws(ref[i].substr(tab2 + 1));
    const auto got = tokenize(docs[i]);
    if (got.size() != count || got != expected) {
      ++mismatches;
      ADD_FAILURE() << "doc " << i;
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Tokenize, SpansAndFlags) {
  const auto spans = tokenize_spans("One two. Three,four");
  ASSERT_EQ(spans.size(), 4u);
  EXPECT_TRUE(spans[0].sentence_initial);
  EXPECT_FALSE(spans[1].sentence_initial);
  EXPECT_TRUE(spans[1].adjacent_to_previous);
  EXPECT_TRUE(spans[2].sentence_initial);
  EXPECT_FALSE(spans[2].adjacent_to_previous);
  EXPECT_FALSE(spans[3].adjacent_to_previous);
  EXPECT_EQ(spans[3].begin, 15u);
  EXPECT_EQ(spans[3].end, 19u);
}

PosLexicon fixture_lexicon() {
  PosLexicon lex;
  lex.add_word("dog", Tag::kNoun);
  lex.add_word("mental", Tag::kAdj);
  lex.add_word("health", Tag::kNoun);
  lex.add_word("declined", Tag::kVerb);
  lex.add_word("machine", Tag::kNoun);
  lex.add_word("learning", Tag::kNoun);
  lex.add_word("model", Tag::kNoun);
  lex.add_word("works", Tag::kVerb);
  lex.add_word("the", Tag::kDet);
  lex.add_suffix_rule("ing", Tag::kVerb);
  lex.add_suffix_rule("tion", Tag::kNoun);
  return lex;
}

TEST(Tag, LexiconSuffixDefault) {
  const auto lex = fixture_lexicon();
  EXPECT_EQ(tag(std::vector<std::string>{"dog"}, lex),
            (std::vector<std::pair<std::string, Tag>>{{"dog", Tag::kNoun}}));
  EXPECT_EQ(lex.tag_word("running", false), Tag::kVerb);
  EXPECT_EQ(lex.tag_word("learning", false), Tag::kNoun);
  EXPECT_EQ(lex.tag_word("Dog", true), Tag::kNoun);
  EXPECT_EQ(lex.tag_word("Cardiff", false), Tag::kNoun);
  EXPECT_EQ(lex.tag_word("Cardiff", true), Tag::kOther);
  EXPECT_EQ(lex.tag_word("zzz", false), Tag::kOther);
}

TEST(Tag, ContextFree) {
  const auto& lex = PosLexicon::bundled();
  Rng rng(5);
  const std::vector<std::string> words = {"report", "quickly", "the", "visit", "happy", "running"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> toks;
    for (int i = 0; i < 8; ++i) toks.push_back(words[rng.uniform_index(words.size())]);
    const auto tagged = tag(toks, lex);
    for (std::size_t i = 1; i < toks.size(); ++i) {
      EXPECT_EQ(tagged[i].second, lex.tag_word(toks[i], false));
    }
  }
}

TEST(Tag, AgreesWithReferenceTagger) {
  const auto& lex = PosLexicon::bundled();
  std::size_t total = 0, agree = 0;
  std::vector<std::string> sentence;
  std::vector<Tag> gold;
  auto flush = [&] {
    const auto tagged = tag(sentence, lex);
    for (std::size_t i = 0; i < tagged.size(); ++i) {
      ++total;
      agree += tagged[i].second == gold[i];
    }
    sentence.clear();
    gold.clear();
  };
  for (const auto& line : read_lines(fixture_path("tag_reference.tsv"))) {
    if (line.empty()) {
      flush();
      continue;
    }
    const auto tab = line.find('\t');
    sentence.push_back(line.substr(0, tab));
    gold.push_back(parse_tag(line.substr(tab + 1)));
  }
  flush();
  ASSERT_GE(total, 200u);
  EXPECT_GE(static_cast<double>(agree) / total, 0.90) << agree << "/" << total;
}

TEST(Tag, BundledLexiconSize) {
  EXPECT_GE(PosLexicon::bundled().size(), 4500u);
  EXPECT_FALSE(PosLexicon::bundled().suffix_rules().empty());
}

TEST(CountNouns, Examples) {
  const auto lex = fixture_lexicon();
  EXPECT_EQ(count_nouns("", lex), (NounStats{0, 0, 0}));
  EXPECT_EQ(count_nouns("mental health declined", lex), (NounStats{1, 0, 1}));
  EXPECT_EQ(count_nouns("machine learning model works", lex), (NounStats{0, 1, 1}));
  EXPECT_EQ(count_nouns("dog, dog dog. dog", lex), (NounStats{2, 1, 3}));
}

TEST(CountNouns, JoinAdditivity) {
  const auto lex = fixture_lexicon();
  const std::vector<std::string> texts = {"the dog works", "machine learning", "dog dog the model",
                                          "mental health declined", "works"};
  for (const auto& a : texts) {
    for (const auto& b : texts) {
      EXPECT_EQ(count_nouns(a + " . " + b, lex).total,
                count_nouns(a, lex).total + count_nouns(b, lex).total);
    }
  }
}

TEST(CountNouns, InvariantUnderReorderingNonNouns) {
  const auto lex = fixture_lexicon();
  EXPECT_EQ(count_nouns("dog the works machine model", lex),
            count_nouns("dog works the machine model", lex));
}

TEST(CountNouns, TotalBounds) {
  const auto& lex = PosLexicon::bundled();
  for (const auto& line : read_lines(fixture_path("tag_sentences.txt"))) {
    const auto s = count_nouns(line, lex);
    EXPECT_EQ(s.total, s.single_nouns + s.compound_nouns);
    EXPECT_GE(s.total, std::max(s.single_nouns, s.compound_nouns));
  }
}

TEST(Lexicon, LoadFromFiles) {
  augwork::testing::TempDir dir;
  {
    std::ofstream(dir.file("lex.tsv")) << "cat\tNOUN\nrun\tVERB\n";
    std::ofstream(dir.file("rules.tsv")) << "ness\tNOUN\nous\tADJ\n";
  }
  const auto lex = PosLexicon::load(dir.file("lex.tsv"), dir.file("rules.tsv"));
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.tag_word("Cat", true), Tag::kNoun);
  EXPECT_EQ(lex.tag_word("kindness", false), Tag::kNoun);
  EXPECT_EQ(lex.tag_word("famous", false), Tag::kAdj);
}

}  // namespace
}  // namespace augwork::nounlex
