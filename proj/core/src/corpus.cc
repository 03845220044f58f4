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

#include "augwork/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "augwork/csv.h"
#include "augwork/error.h"
#include "augwork/rng.h"
#include "augwork/text.h"

namespace augwork::corpus {
namespace {

using nlohmann::json;

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord,
              "line " + std::to_string(line) + ": " + what);
}

std::string ordinal_id(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "r%06zu", ordinal);
  return buf;
}

struct RawRecord {
  std::optional<std::string> id;
  std::string text;
  std::string label;
  std::optional<std::string> subclass;
  Role role = Role::kTrain;
  std::size_t line = 0;
};

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail_at(line, std::string("field '") + key +
                                          "' must be a string");
  std::string value = it->get<std::string>();
  if (value.empty()) return std::nullopt;
  return value;
}

std::vector<RawRecord> read_jsonl(std::istream& in) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (!text::is_valid_utf8(line)) fail_at(lineno, "invalid UTF-8");
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_at(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_at(lineno, "record must be a JSON object");
    RawRecord r;
    r.line = lineno;
    r.id = optional_string(obj, "id", lineno);
    auto text = optional_string(obj, "text", lineno);
    if (!text) fail_at(lineno, "missing 'text'");
    r.text = *text;
    if (auto split = optional_string(obj, "split", lineno)) {
      try {
        r.role = parse_role(*split);
      } catch (const Error&) {
        fail_at(lineno, "unknown split '" + *split + "'");
      }
    }
    auto label = optional_string(obj, "label", lineno);
    if (!label && r.role != Role::kDomain) fail_at(lineno, "missing 'label'");
    r.label = label.value_or("");
    r.subclass = optional_string(obj, "subclass", lineno);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RawRecord> read_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) return {};
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header->fields.size(); ++i) {
    column[std::string(text::trim(header->fields[i]))] = i;
  }
  if (!column.count("text") || !column.count("label")) {
    fail_at(header->line, "CSV header must name 'text' and 'label' columns");
  }
  auto field = [&](const csv::Row& row,
                   const char* name) -> std::optional<std::string> {
    auto it = column.find(name);
    if (it == column.end() || it->second >= row.fields.size()) {
      return std::nullopt;
    }
    const std::string& v = row.fields[it->second];
    if (v.empty()) return std::nullopt;
    return v;
  };

  std::vector<RawRecord> records;
  while (auto row = reader.next()) {
    if (row->fields.size() == 1 && text::trim(row->fields[0]).empty()) {
      continue;
    }
    for (const auto& f : row->fields) {
      if (!text::is_valid_utf8(f)) fail_at(row->line, "invalid UTF-8");
    }
    if (row->fields.size() != header->fields.size()) {
      fail_at(row->line, "expected " + std::to_string(header->fields.size()) +
                             " fields, got " +
                             std::to_string(row->fields.size()));
    }
    RawRecord r;
    r.line = row->line;
    r.id = field(*row, "id");
    if (auto split = field(*row, "split")) {
      try {
        r.role = parse_role(*split);
      } catch (const Error&) {
        fail_at(row->line, "unknown split '" + *split + "'");
      }
    }
    r.text = field(*row, "text").value_or("");
    auto label = field(*row, "label");
    if (!label && r.role != Role::kDomain) fail_at(row->line, "missing label");
    r.label = label.value_or("");
    r.subclass = field(*row, "subclass");
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

std::string_view to_string(Unit unit) {
  return unit == Unit::kSentence ? "sentence" : "passage";
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kTrain: return "train";
    case Role::kTest: return "test";
    case Role::kDomain: return "domain";
  }
  return "train";
}

Unit parse_unit(std::string_view s) {
  if (s == "sentence") return Unit::kSentence;
  if (s == "passage") return Unit::kPassage;
  throw Error(ErrorCode::kUsage, "unknown unit '" + std::string(s) + "'");
}

Role parse_role(std::string_view s) {
  if (s == "train") return Role::kTrain;
  if (s == "test") return Role::kTest;
  if (s == "domain") return Role::kDomain;
  throw Error(ErrorCode::kUsage, "unknown split '" + std::string(s) + "'");
}

Format parse_format(std::string_view s) {
  if (s == "jsonl") return Format::kJsonl;
  if (s == "csv") return Format::kCsv;
  throw Error(ErrorCode::kUsage, "unknown format '" + std::string(s) + "'");
}

void ClassHierarchy::add_class(const std::string& name) {
  classes_.insert(name);
}

void ClassHierarchy::add_subclass(const std::string& subclass,
                                  const std::string& cls) {
  auto it = subclass_of_.find(subclass);
  if (it != subclass_of_.end() && it->second != cls) {
    throw Error(ErrorCode::kHierarchyConflict,
                "subclass '" + subclass + "' is mapped to both '" +
                    it->second + "' and '" + cls + "'");
  }
  classes_.insert(cls);
  subclass_of_.emplace(subclass, cls);
}

bool ClassHierarchy::has_class(std::string_view name) const {
  return classes_.find(name) != classes_.end();
}

std::optional<std::string> ClassHierarchy::class_of(
    std::string_view subclass) const {
  auto it = subclass_of_.find(subclass);
  if (it == subclass_of_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ClassHierarchy::subclasses_of(
    std::string_view cls) const {
  std::vector<std::string> out;
  for (const auto& [sub, c] : subclass_of_) {
    if (c == cls) out.push_back(sub);
  }
  return out;
}

ClassHierarchy ClassHierarchy::from_json(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("hierarchy: invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kMalformedRecord,
                "hierarchy: expected an object mapping class to subclasses");
  }
  ClassHierarchy h;
  for (const auto& [cls, subs] : obj.items()) {
    h.add_class(cls);
    if (!subs.is_array()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "hierarchy: subclasses of '" + cls + "' must be an array");
    }
    for (const auto& s : subs) {
      if (!s.is_string()) {
        throw Error(ErrorCode::kMalformedRecord,
                    "hierarchy: subclass names must be strings");
      }
      h.add_subclass(s.get<std::string>(), cls);
    }
  }
  return h;
}

std::string ClassHierarchy::to_json() const {
  json obj = json::object();
  for (const auto& cls : classes_) obj[cls] = json::array();
  for (const auto& [sub, cls] : subclass_of_) obj[cls].push_back(sub);
  return obj.dump();
}

void LabeledDataset::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& inst : instances) {
    if (text::trim(inst.text).empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "instance '" + inst.id + "' has empty text");
    }
    if (!ids.insert(inst.id).second) {
      throw Error(ErrorCode::kInvalidInput,
                  "duplicate instance id '" + inst.id + "'");
    }
    if (inst.role == Role::kDomain && inst.label.empty()) continue;
    if (!hierarchy.has_class(inst.label)) {
      throw Error(ErrorCode::kInvalidInput,
                  "instance '" + inst.id + "' has unknown label '" +
                      inst.label + "'");
    }
    if (inst.subclass) {
      auto cls = hierarchy.class_of(*inst.subclass);
      if (!cls || *cls != inst.label) {
        throw Error(ErrorCode::kHierarchyConflict,
                    "instance '" + inst.id + "': subclass '" +
                        *inst.subclass + "' does not belong to '" +
                        inst.label + "'");
      }
    }
  }
}

std::vector<Instance> LabeledDataset::with_role(Role role) const {
  std::vector<Instance> out;
  for (const auto& inst : instances) {
    if (inst.role == role) out.push_back(inst);
  }
  return out;
}

std::map<std::string, std::vector<Instance>> LabeledDataset::train_by_class()
    const {
  std::map<std::string, std::vector<Instance>> out;
  for (const auto& cls : hierarchy.classes()) out[cls];
  for (const auto& inst : instances) {
    if (inst.role == Role::kTrain) out[inst.label].push_back(inst);
  }
  return out;
}

LabeledDataset ingest(std::istream& in, const IngestOptions& options) {
  std::vector<RawRecord> records =
      options.format == Format::kJsonl ? read_jsonl(in) : read_csv(in);

  LabeledDataset ds;
  ds.name = options.name;
  const bool explicit_hierarchy = options.hierarchy.has_value();
  if (explicit_hierarchy) ds.hierarchy = *options.hierarchy;

  std::unordered_set<std::string> ids;
  std::size_t ordinal = 0;
  for (auto& r : records) {
    ++ordinal;
    if (text::trim(r.text).empty()) fail_at(r.line, "empty text");
    const bool labeled = !r.label.empty();
    if (labeled) {
      if (explicit_hierarchy) {
        if (!ds.hierarchy.has_class(r.label)) {
          fail_at(r.line, "label '" + r.label + "' not in hierarchy");
        }
        if (r.subclass) {
          auto cls = ds.hierarchy.class_of(*r.subclass);
          if (!cls) {
            fail_at(r.line, "subclass '" + *r.subclass + "' not in hierarchy");
          }
          if (*cls != r.label) {
            throw Error(ErrorCode::kHierarchyConflict,
                        "line " + std::to_string(r.line) + ": subclass '" +
                            *r.subclass + "' belongs to '" + *cls +
                            "', not '" + r.label + "'");
          }
        }
      } else if (r.subclass) {
        try {
          ds.hierarchy.add_subclass(*r.subclass, r.label);
        } catch (const Error& e) {
          throw Error(ErrorCode::kHierarchyConflict,
                      "line " + std::to_string(r.line) + ": " + e.what());
        }
      } else {
        ds.hierarchy.add_class(r.label);
      }
    }
    Instance inst;
    inst.id = r.id ? *r.id : ordinal_id(ordinal);
    if (!ids.insert(inst.id).second) {
      fail_at(r.line, "duplicate id '" + inst.id + "'");
    }
    inst.text = std::move(r.text);
    inst.label = std::move(r.label);
    inst.subclass = std::move(r.subclass);
    inst.unit = options.unit;
    inst.role = r.role;
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

LabeledDataset load_dataset(const std::string& path,
                            const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ingest(in, options);
}

std::string to_json_line(const Instance& inst) {
  json obj;
  obj["id"] = inst.id;
  obj["text"] = inst.text;
  obj["label"] = inst.label;
  if (inst.subclass) obj["subclass"] = *inst.subclass;
  if (inst.role != Role::kTrain) obj["split"] = to_string(inst.role);
  return obj.dump();
}

void write_jsonl(std::ostream& out, const LabeledDataset& dataset) {
  for (const auto& inst : dataset.instances) out << to_json_line(inst) << '\n';
}

MulticlassResult to_multiclass(const std::vector<MultiLabelRecord>& records,
                               const std::string& name) {
  MulticlassResult result;
  result.dataset.name = name;
  std::size_t ordinal = 0;
  for (const auto& r : records) {
    ++ordinal;
    if (r.labels.size() != 1) {
      ++result.dropped;
      continue;
    }
    Instance inst;
    inst.id = r.id.empty() ? ordinal_id(ordinal) : r.id;
    inst.text = r.text;
    inst.label = r.labels.front();
    inst.subclass = r.subclass;
    if (inst.subclass) {
      result.dataset.hierarchy.add_subclass(*inst.subclass, inst.label);
    } else {
      result.dataset.hierarchy.add_class(inst.label);
    }
    result.dataset.instances.push_back(std::move(inst));
  }
  return result;
}

std::vector<MultiLabelRecord> read_multilabel_jsonl(std::istream& in) {
  std::vector<MultiLabelRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_at(lineno, std::string("invalid JSON: ") + e.what());
    }
    MultiLabelRecord r;
    r.id = optional_string(obj, "id", lineno).value_or("");
    auto t = optional_string(obj, "text", lineno);
    if (!t || text::trim(*t).empty()) fail_at(lineno, "missing or empty text");
    r.text = *t;
    auto labels = obj.find("labels");
    if (labels == obj.end() || !labels->is_array() || labels->empty()) {
      fail_at(lineno, "'labels' must be a non-empty array");
    }
    for (const auto& l : *labels) {
      if (!l.is_string()) fail_at(lineno, "labels must be strings");
      r.labels.push_back(l.get<std::string>());
    }
    r.subclass = optional_string(obj, "subclass", lineno);
    out.push_back(std::move(r));
  }
  return out;
}

AbbreviationList default_abbreviations() {
  return {"dr.",   "mr.",  "mrs.", "ms.",  "prof.", "st.",  "jr.",
          "sr.",   "e.g.", "i.e.", "vs.",  "no.",   "inc.", "ltd.",
          "co.",   "dept.", "approx.", "fig.", "a.m.", "p.m.", "u.k.",
          "u.s.",  "etc.", "cf.", "mt.",  "gen.",  "col.", "capt."};
}

AbbreviationList load_abbreviations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  AbbreviationList out;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string entry = text::lower(t);
    if (entry.back() != '.') entry.push_back('.');
    out.insert(std::move(entry));
  }
  return out;
}

namespace {

bool is_closer(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U')' || cp == U']' ||
         cp == 0x2019 || cp == 0x201D || cp == 0xBB;
}

bool is_opener(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U'(' || cp == U'[' ||
         cp == 0x2018 || cp == 0x201C || cp == 0xAB;
}

// The word (letters and internal periods) ending just before s[dot].
std::string word_before(std::string_view s, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0) {
    const unsigned char c = static_cast<unsigned char>(s[begin - 1]);
    if (c == '.' || std::isalpha(c) || c >= 0x80) {
      --begin;
    } else {
      break;
    }
  }
  return text::lower(s.substr(begin, dot - begin + 1));
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view s,
                                           const AbbreviationList& abbrevs) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t pos = 0;
  auto emit = [&](std::size_t end) {
    std::string_view piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  while (pos < s.size()) {
    const char c = s[pos];
    if (c != '.' && c != '!' && c != '?') {
      ++pos;
      continue;
    }
    const std::size_t run_begin = pos;
    while (pos < s.size() && (s[pos] == '.' || s[pos] == '!' || s[pos] == '?')) {
      ++pos;
    }
    const bool single_period = pos - run_begin == 1 && c == '.';
    // Closing quotes or brackets stay with the sentence.
    std::size_t end = pos;
    while (end < s.size()) {
      std::size_t p = end;
      if (!is_closer(text::decode_next(s, p))) break;
      end = p;
    }
    // Need whitespace, optional openers, then uppercase or digit.
    std::size_t p = end;
    bool saw_space = false;
    while (p < s.size()) {
      std::size_t q = p;
      if (!text::is_whitespace(text::decode_next(s, q))) break;
      saw_space = true;
      p = q;
    }
    pos = end;
    if (!saw_space || p >= s.size()) continue;
    char32_t next = text::decode_next(s, p);
    while (is_opener(next) && p < s.size()) next = text::decode_next(s, p);
    if (!(text::is_upper(next) || text::is_digit(next))) continue;
    if (single_period && abbrevs.count(word_before(s, run_begin))) continue;
    emit(end);
  }
  emit(s.size());
  return out;
}

LabeledDataset split_sentences(const LabeledDataset& dataset,
                               const AbbreviationList& abbrevs) {
  LabeledDataset out;
  out.name = dataset.name;
  out.hierarchy = dataset.hierarchy;
  for (const auto& inst : dataset.instances) {
    if (inst.unit != Unit::kPassage) {
      throw Error(ErrorCode::kInvalidInput,
                  "split_sentences: instance '" + inst.id +
                      "' is not passage-level");
    }
    auto sentences = segment_sentences(inst.text, abbrevs);
    for (std::size_t k = 0; k < sentences.size(); ++k) {
      Instance s = inst;
      s.id = inst.id + "#" + std::to_string(k);
      s.text = std::move(sentences[k]);
      s.unit = Unit::kSentence;
      out.instances.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Instance> FewShotSplit::base_instances() const {
  std::vector<Instance> out;
  for (const auto& [cls, insts] : base) {
    out.insert(out.end(), insts.begin(), insts.end());
  }
  return out;
}

FewShotSplit sample_base(const LabeledDataset& dataset, std::size_t k,
                         std::uint64_t rng_seed) {
  if (k == 0) throw Error(ErrorCode::kInvalidInput, "k_per_label must be > 0");
  FewShotSplit split;
  split.rng_seed = rng_seed;
  split.k = k;
  std::unordered_set<std::string> chosen_ids;

  for (const auto& [cls, members] : dataset.train_by_class()) {
    if (members.size() < k) {
      throw Error(ErrorCode::kInsufficientData,
                  "class '" + cls + "' has " + std::to_string(members.size()) +
                      " train instances, need " + std::to_string(k));
    }
    Rng rng(derive_seed(rng_seed, "base:" + cls));

    std::map<std::string, std::vector<std::size_t>> by_subclass;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].subclass) by_subclass[*members[i].subclass].push_back(i);
    }
    std::vector<std::string> subclasses;
    for (const auto& [sub, idx] : by_subclass) subclasses.push_back(sub);
    rng.shuffle(subclasses);
    if (subclasses.size() > k) subclasses.resize(k);

    std::vector<bool> taken(members.size(), false);
    std::vector<Instance>& picked = split.base[cls];
    for (const auto& sub : subclasses) {
      const auto& idx = by_subclass[sub];
      const std::size_t i = idx[rng.uniform_index(idx.size())];
      taken[i] = true;
      picked.push_back(members[i]);
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    for (std::size_t r : rng.sample_indices(rest.size(), k - picked.size())) {
      picked.push_back(members[rest[r]]);
    }
    for (const auto& inst : picked) chosen_ids.insert(inst.id);
  }

  for (const auto& inst : dataset.instances) {
    if (inst.role == Role::kTest) {
      split.test.push_back(inst);
    } else if (inst.role == Role::kTrain && !chosen_ids.count(inst.id)) {
      split.pool.push_back(inst);
    }
  }
  return split;
}

LabeledDataset hold_out_test(const LabeledDataset& dataset, double fraction,
                             std::uint64_t rng_seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "test fraction must be in [0, 1)");
  }
  LabeledDataset out = dataset;
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < out.instances.size(); ++i) {
    if (out.instances[i].role == Role::kTrain) {
      by_class[out.instances[i].label].push_back(i);
    }
  }
  for (const auto& [cls, idx] : by_class) {
    Rng rng(derive_seed(rng_seed, "test:" + cls));
    const auto n_test =
        static_cast<std::size_t>(std::floor(fraction * idx.size() + 0.5));
    for (std::size_t r : rng.sample_indices(idx.size(), n_test)) {
      out.instances[idx[r]].role = Role::kTest;
    }
  }
  return out;
}

}  // namespace augwork::corpus
