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

#ifndef AUGWORK_NOUNLEX_H_
#define AUGWORK_NOUNLEX_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

// Tokenization, context-free lexicon tagging and noun counting.
namespace augwork::nounlex {

enum class Tag { kNoun, kVerb, kAdj, kDet, kOther };

std::string_view to_string(Tag tag);
Tag parse_tag(std::string_view s);

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
  // First token of the text, or first after a . ! ? terminator.
  bool sentence_initial = false;
  // Only whitespace separates this token from the previous one.
  bool adjacent_to_previous = false;
};

// Maximal runs of letters, digits and apostrophes; everything else is a
// separator. Case is preserved.
std::vector<std::string> tokenize(std::string_view text);
std::vector<Token> tokenize_spans(std::string_view text);

class PosLexicon {
 public:
  PosLexicon() = default;

  // TSV files: "token<TAB>tag" and "suffix<TAB>tag" (priority order).
  static PosLexicon load(const std::string& lexicon_path,
                         const std::string& suffix_rules_path);
  // The bundled ~5k-word lexicon and default suffix rules.
  static const PosLexicon& bundled();

  void add_word(std::string_view token, Tag tag);
  void add_suffix_rule(std::string_view suffix, Tag tag);

  // Lookup on the lowercased token, then suffix rules in order, then the
  // default: NOUN for capitalized tokens that are not sentence-initial,
  // OTHER otherwise.
  Tag tag_word(std::string_view token, bool sentence_initial) const;

  std::size_t size() const { return word_tags_.size(); }
  const std::vector<std::pair<std::string, Tag>>& suffix_rules() const {
    return suffix_rules_;
  }

 private:
  std::unordered_map<std::string, Tag> word_tags_;
  std::vector<std::pair<std::string, Tag>> suffix_rules_;
  Tag default_tag_ = Tag::kOther;
  Tag capitalized_tag_ = Tag::kNoun;
};

// Token 0 is treated as sentence-initial.
std::vector<std::pair<std::string, Tag>> tag(
    const std::vector<std::string>& tokens, const PosLexicon& lexicon);
std::vector<Tag> tag(const std::vector<Token>& tokens,
                     const PosLexicon& lexicon);

struct NounStats {
  std::size_t single_nouns = 0;
  std::size_t compound_nouns = 0;
  std::size_t total = 0;

  bool operator==(const NounStats&) const = default;
};

// Runs of >= 2 adjacent NOUN tokens count as one compound noun, isolated
// NOUN tokens as single nouns. Punctuation between tokens breaks a run.
NounStats count_nouns(std::string_view text, const PosLexicon& lexicon);

}  // namespace augwork::nounlex

#endif  // AUGWORK_NOUNLEX_H_
