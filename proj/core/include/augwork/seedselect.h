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

#ifndef AUGWORK_SEEDSELECT_H_
#define AUGWORK_SEEDSELECT_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "augwork/corpus.h"
#include "augwork/nounlex.h"

namespace augwork::seedselect {

enum class Strategy { kRandom, kMaxNouns, kSubclass, kExpertRandom, kExpertNouns };

// CLI spellings: random, nouns, subclass, expert-random, expert-nouns.
std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);
bool is_expert(Strategy s);

enum class Verdict { kGood, kBad, kUnsure };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

struct VerdictEntry {
  std::string instance_id;
  Verdict verdict = Verdict::kUnsure;
  std::string annotator;

  bool operator==(const VerdictEntry&) const = default;
};

// JSONL {"instance_id", "verdict": "good"|"bad"|"unsure", "annotator"}.
struct VerdictSheet {
  std::vector<VerdictEntry> entries;

  static VerdictSheet read_jsonl(std::istream& in);
  static VerdictSheet load(const std::string& path);
  std::string to_jsonl() const;
};

struct SeedSet {
  std::map<std::string, std::vector<corpus::Instance>> per_class;
  Strategy strategy = Strategy::kRandom;
  std::size_t n_per_class = 0;
  std::optional<std::uint64_t> rng_seed;  // unset for deterministic strategies
  // Classes whose pool held fewer than n_per_class candidates.
  std::map<std::string, std::size_t> shortfall;

  std::vector<corpus::Instance> instances() const;
};

// Candidate pools are the train-role instances of `pool`, grouped by label.
// Every strategy throws Error(kInsufficientData) naming a class that has no
// candidates.

SeedSet select_random(const corpus::LabeledDataset& pool, std::size_t n,
                      std::uint64_t rng_seed);

// Per class: sort by (noun total desc, id asc), take the first n.
SeedSet select_max_nouns(const corpus::LabeledDataset& pool, std::size_t n,
                         const nounlex::PosLexicon& lexicon);

// Per class: visit subclasses round-robin in a shuffled order, drawing one
// unseen instance per visit; exhausted subclasses are skipped. Instances with
// no subclass form one extra group.
SeedSet select_subclass_balanced(const corpus::LabeledDataset& pool,
                                 std::size_t n, std::uint64_t rng_seed);

enum class ExpertSubStrategy { kRandom, kMaxNouns };

// Restricts each class to instances judged good, then applies the
// sub-strategy. Several entries for one instance must agree unless one of
// them comes from annotator "consensus", which then wins.
SeedSet select_expert(const corpus::LabeledDataset& pool,
                      const VerdictSheet& verdicts, std::size_t n,
                      ExpertSubStrategy sub_strategy, std::uint64_t rng_seed,
                      const nounlex::PosLexicon& lexicon);

// Dispatches on strategy. `verdicts` is required for the expert strategies.
SeedSet select(Strategy strategy, const corpus::LabeledDataset& pool,
               std::size_t n, std::uint64_t rng_seed,
               const nounlex::PosLexicon& lexicon,
               const VerdictSheet* verdicts = nullptr);

inline constexpr std::string_view kConsensusAnnotator = "consensus";

}  // namespace augwork::seedselect

#endif  // AUGWORK_SEEDSELECT_H_
