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

#include <fstream>

#include "augwork/data_paths.h"
#include "augwork/error.h"
#include "augwork/text.h"

namespace augwork::nounlex {

std::string_view to_string(Tag tag) {
  switch (tag) {
    case Tag::kNoun: return "NOUN";
    case Tag::kVerb: return "VERB";
    case Tag::kAdj: return "ADJ";
    case Tag::kDet: return "DET";
    case Tag::kOther: return "OTHER";
  }
  return "OTHER";
}

Tag parse_tag(std::string_view s) {
  if (s == "NOUN") return Tag::kNoun;
  if (s == "VERB") return Tag::kVerb;
  if (s == "ADJ") return Tag::kAdj;
  if (s == "DET") return Tag::kDet;
  if (s == "OTHER") return Tag::kOther;
  throw Error(ErrorCode::kMalformedRecord, "unknown tag '" + std::string(s) + "'");
}

std::vector<Token> tokenize_spans(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  bool after_terminator = true;
  bool gap_is_space = false;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = text::decode_next(s, pos);
    if (text::is_letter(cp) || text::is_digit(cp) || text::is_apostrophe(cp)) {
      std::size_t end = pos;
      while (end < s.size()) {
        std::size_t p = end;
        const char32_t c = text::decode_next(s, p);
        if (!(text::is_letter(c) || text::is_digit(c) ||
              text::is_apostrophe(c))) {
          break;
        }
        end = p;
      }
      Token t;
      t.text = std::string(s.substr(start, end - start));
      t.begin = start;
      t.end = end;
      t.sentence_initial = after_terminator;
      t.adjacent_to_previous = !tokens.empty() && gap_is_space;
      tokens.push_back(std::move(t));
      pos = end;
      after_terminator = false;
      gap_is_space = true;
      continue;
    }
    if (!text::is_whitespace(cp)) {
      gap_is_space = false;
      if (cp == U'.' || cp == U'!' || cp == U'?') after_terminator = true;
    }
  }
  return tokens;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize_spans(s)) out.push_back(std::move(t.text));
  return out;
}

PosLexicon PosLexicon::load(const std::string& lexicon_path,
                            const std::string& suffix_rules_path) {
  PosLexicon lex;
  auto read_tsv = [](const std::string& path, auto&& on_row) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::kMalformedRecord,
                    path + ":" + std::to_string(lineno) + ": expected TAB");
      }
      on_row(std::string_view(line).substr(0, tab),
             parse_tag(text::trim(std::string_view(line).substr(tab + 1))));
    }
  };
  read_tsv(lexicon_path, [&](std::string_view w, Tag t) { lex.add_word(w, t); });
  read_tsv(suffix_rules_path,
           [&](std::string_view s, Tag t) { lex.add_suffix_rule(s, t); });
  return lex;
}

const PosLexicon& PosLexicon::bundled() {
  static const PosLexicon lex = load(data_file("lexicon.tsv").string(),
                                     data_file("suffix_rules.tsv").string());
  return lex;
}

void PosLexicon::add_word(std::string_view token, Tag tag) {
  word_tags_[text::lower(token)] = tag;
}

void PosLexicon::add_suffix_rule(std::string_view suffix, Tag tag) {
  if (!suffix.empty() && suffix.front() == '-') suffix.remove_prefix(1);
  suffix_rules_.emplace_back(text::lower(suffix), tag);
}

Tag PosLexicon::tag_word(std::string_view token, bool sentence_initial) const {
  const std::string lowered = text::lower(token);
  if (auto it = word_tags_.find(lowered); it != word_tags_.end()) {
    return it->second;
  }
  for (const auto& [suffix, tag] : suffix_rules_) {
    if (lowered.size() > suffix.size() &&
        lowered.compare(lowered.size() - suffix.size(), suffix.size(),
                        suffix) == 0) {
      return tag;
    }
  }
  if (!sentence_initial && !token.empty()) {
    std::size_t pos = 0;
    if (text::is_upper(text::decode_next(token, pos))) return capitalized_tag_;
  }
  return default_tag_;
}

std::vector<std::pair<std::string, Tag>> tag(
    const std::vector<std::string>& tokens, const PosLexicon& lexicon) {
  std::vector<std::pair<std::string, Tag>> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.emplace_back(tokens[i], lexicon.tag_word(tokens[i], i == 0));
  }
  return out;
}

std::vector<Tag> tag(const std::vector<Token>& tokens,
                     const PosLexicon& lexicon) {
  std::vector<Tag> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    out.push_back(lexicon.tag_word(t.text, t.sentence_initial));
  }
  return out;
}

NounStats count_nouns(std::string_view text, const PosLexicon& lexicon) {
  const auto tokens = tokenize_spans(text);
  const auto tags = tag(tokens, lexicon);
  NounStats stats;
  std::size_t run = 0;
  auto close_run = [&] {
    if (run == 1) ++stats.single_nouns;
    if (run >= 2) ++stats.compound_nouns;
    run = 0;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tags[i] != Tag::kNoun) {
      close_run();
      continue;
    }
    if (run > 0 && !tokens[i].adjacent_to_previous) close_run();
    ++run;
  }
  close_run();
  stats.total = stats.single_nouns + stats.compound_nouns;
  return stats;
}

}  // namespace augwork::nounlex
