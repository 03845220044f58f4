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

#ifndef AUGWORK_CORPUS_H_
#define AUGWORK_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace augwork::corpus {

enum class Unit { kSentence, kPassage };
// kDomain marks unlabeled domain-corpus text; such instances may have an
// empty label and are ignored by the label invariants.
enum class Role { kTrain, kTest, kDomain };

std::string_view to_string(Unit unit);
std::string_view to_string(Role role);
Unit parse_unit(std::string_view s);
Role parse_role(std::string_view s);

struct Instance {
  std::string id;
  std::string text;
  std::string label;
  std::optional<std::string> subclass;
  Unit unit = Unit::kPassage;
  Role role = Role::kTrain;

  bool operator==(const Instance&) const = default;
};

// Two-level class tree: every subclass belongs to exactly one class.
class ClassHierarchy {
 public:
  void add_class(const std::string& name);
  // Throws Error(kHierarchyConflict) if subclass is already mapped to a
  // different class. Adds the class if needed.
  void add_subclass(const std::string& subclass, const std::string& cls);

  bool has_class(std::string_view name) const;
  std::optional<std::string> class_of(std::string_view subclass) const;
  std::vector<std::string> subclasses_of(std::string_view cls) const;

  const std::set<std::string, std::less<>>& classes() const { return classes_; }
  const std::map<std::string, std::string, std::less<>>& subclass_of() const {
    return subclass_of_;
  }

  // JSON object mapping class -> [subclass, ...].
  static ClassHierarchy from_json(std::string_view json);
  std::string to_json() const;

  bool operator==(const ClassHierarchy&) const = default;

 private:
  std::set<std::string, std::less<>> classes_;
  std::map<std::string, std::string, std::less<>> subclass_of_;
};

struct LabeledDataset {
  std::string name;
  ClassHierarchy hierarchy;
  std::vector<Instance> instances;

  // Checks every invariant (non-empty text, known labels, consistent
  // subclasses, unique ids). Throws Error(kInvalidInput) on violation.
  void validate() const;

  std::vector<Instance> with_role(Role role) const;
  // Train instances grouped by label, in dataset order.
  std::map<std::string, std::vector<Instance>> train_by_class() const;
};

enum class Format { kJsonl, kCsv };
Format parse_format(std::string_view s);

struct IngestOptions {
  Format format = Format::kJsonl;
  std::optional<ClassHierarchy> hierarchy;
  std::string name = "dataset";
  Unit unit = Unit::kPassage;
};

// Reads JSONL ({"id"?, "text", "label", "subclass"?, "split"?}) or RFC-4180
// CSV with a header row naming the same columns. Missing ids become
// "r<ordinal>" zero-padded to six digits. Errors name the 1-based line.
LabeledDataset ingest(std::istream& in, const IngestOptions& options);

LabeledDataset load_dataset(const std::string& path,
                            const IngestOptions& options);

void write_jsonl(std::ostream& out, const LabeledDataset& dataset);
std::string to_json_line(const Instance& instance);

struct MultiLabelRecord {
  std::string id;
  std::string text;
  std::vector<std::string> labels;
  std::optional<std::string> subclass;
};

struct MulticlassResult {
  LabeledDataset dataset;
  std::size_t dropped = 0;
};

// Keeps records carrying exactly one label and drops the rest.
MulticlassResult to_multiclass(const std::vector<MultiLabelRecord>& records,
                               const std::string& name = "dataset");

// JSONL records {"id"?, "text", "labels": [..], "subclass"?}.
std::vector<MultiLabelRecord> read_multilabel_jsonl(std::istream& in);

using AbbreviationList = std::set<std::string, std::less<>>;

// Lowercased entries including the trailing period, e.g. "dr.".
AbbreviationList load_abbreviations(const std::string& path);
AbbreviationList default_abbreviations();

// Rule-based segmentation: a boundary follows a run of . ! ? (plus any
// closing quotes or brackets) when whitespace and then an uppercase letter
// or digit come next, unless the word ending in "." is in the stop-list.
std::vector<std::string> segment_sentences(std::string_view text,
                                           const AbbreviationList& abbrevs);

// Splits every passage into sentence instances with ids "<parent>#<k>".
LabeledDataset split_sentences(const LabeledDataset& dataset,
                               const AbbreviationList& abbrevs);

struct FewShotSplit {
  std::map<std::string, std::vector<Instance>> base;
  std::vector<Instance> pool;
  std::vector<Instance> test;
  std::uint64_t rng_seed = 0;
  std::size_t k = 0;

  std::vector<Instance> base_instances() const;
};

// Draws k train instances per class, covering distinct subclasses before
// filling the remainder uniformly. If a class has more subclasses than k, k
// of them are chosen at random.
FewShotSplit sample_base(const LabeledDataset& dataset, std::size_t k,
                         std::uint64_t rng_seed);

// Moves a stratified fraction of each class's train instances to the test
// role. Used when the input carries no explicit test split.
LabeledDataset hold_out_test(const LabeledDataset& dataset, double fraction,
                             std::uint64_t rng_seed);

}  // namespace augwork::corpus

#endif  // AUGWORK_CORPUS_H_
