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

#include "augwork/seedselect.h"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "augwork/error.h"
#include "augwork/rng.h"
#include "augwork/text.h"

namespace augwork::seedselect {
namespace {

using corpus::Instance;
using corpus::LabeledDataset;

std::map<std::string, std::vector<Instance>> candidates_by_class(
    const LabeledDataset& pool) {
  auto by_class = pool.train_by_class();
  for (const auto& [cls, members] : by_class) {
    if (members.empty()) {
      throw Error(ErrorCode::kInsufficientData,
                  "class '" + cls + "' has no pool instances");
    }
  }
  return by_class;
}

void note_shortfall(SeedSet& set, const std::string& cls, std::size_t have) {
  if (have < set.n_per_class) set.shortfall[cls] = set.n_per_class - have;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "random";
    case Strategy::kMaxNouns: return "nouns";
    case Strategy::kSubclass: return "subclass";
    case Strategy::kExpertRandom: return "expert-random";
    case Strategy::kExpertNouns: return "expert-nouns";
  }
  return "random";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "random") return Strategy::kRandom;
  if (s == "nouns" || s == "max_nouns" || s == "max-nouns") {
    return Strategy::kMaxNouns;
  }
  if (s == "subclass") return Strategy::kSubclass;
  if (s == "expert-random" || s == "expert_random") {
    return Strategy::kExpertRandom;
  }
  if (s == "expert-nouns" || s == "expert_nouns") return Strategy::kExpertNouns;
  throw Error(ErrorCode::kUsage, "unknown strategy '" + std::string(s) + "'");
}

bool is_expert(Strategy s) {
  return s == Strategy::kExpertRandom || s == Strategy::kExpertNouns;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kGood: return "good";
    case Verdict::kBad: return "bad";
    case Verdict::kUnsure: return "unsure";
  }
  return "unsure";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "good") return Verdict::kGood;
  if (s == "bad") return Verdict::kBad;
  if (s == "unsure") return Verdict::kUnsure;
  throw Error(ErrorCode::kInvalidInput, "unknown verdict '" + std::string(s) + "'");
}

VerdictSheet VerdictSheet::read_jsonl(std::istream& in) {
  VerdictSheet sheet;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto obj = nlohmann::json::parse(line);
      VerdictEntry e;
      e.instance_id = obj.at("instance_id").get<std::string>();
      e.verdict = parse_verdict(obj.at("verdict").get<std::string>());
      e.annotator = obj.value("annotator", "");
      sheet.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "verdicts line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "verdicts line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return sheet;
}

VerdictSheet VerdictSheet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_jsonl(in);
}

std::string VerdictSheet::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) {
    nlohmann::json obj;
    obj["instance_id"] = e.instance_id;
    obj["verdict"] = to_string(e.verdict);
    obj["annotator"] = e.annotator;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<Instance> SeedSet::instances() const {
  std::vector<Instance> out;
  for (const auto& [cls, insts] : per_class) {
    out.insert(out.end(), insts.begin(), insts.end());
  }
  return out;
}

SeedSet select_random(const LabeledDataset& pool, std::size_t n,
                      std::uint64_t rng_seed) {
  SeedSet set;
  set.strategy = Strategy::kRandom;
  set.n_per_class = n;
  set.rng_seed = rng_seed;
  for (const auto& [cls, members] : candidates_by_class(pool)) {
    Rng rng(derive_seed(rng_seed, "random:" + cls));
    auto& picked = set.per_class[cls];
    for (std::size_t i : rng.sample_indices(members.size(), n)) {
      picked.push_back(members[i]);
    }
    note_shortfall(set, cls, members.size());
  }
  return set;
}

SeedSet select_max_nouns(const LabeledDataset& pool, std::size_t n,
                         const nounlex::PosLexicon& lexicon) {
  SeedSet set;
  set.strategy = Strategy::kMaxNouns;
  set.n_per_class = n;
  for (const auto& [cls, members] : candidates_by_class(pool)) {
    std::vector<std::pair<std::size_t, const Instance*>> scored;
    scored.reserve(members.size());
    for (const auto& inst : members) {
      scored.emplace_back(nounlex::count_nouns(inst.text, lexicon).total, &inst);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second->id < b.second->id;
    });
    auto& picked = set.per_class[cls];
    for (std::size_t i = 0; i < std::min(n, scored.size()); ++i) {
      picked.push_back(*scored[i].second);
    }
    note_shortfall(set, cls, members.size());
  }
  return set;
}

SeedSet select_subclass_balanced(const LabeledDataset& pool, std::size_t n,
                                 std::uint64_t rng_seed) {
  SeedSet set;
  set.strategy = Strategy::kSubclass;
  set.n_per_class = n;
  set.rng_seed = rng_seed;
  for (const auto& [cls, members] : candidates_by_class(pool)) {
    Rng rng(derive_seed(rng_seed, "subclass:" + cls));
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < members.size(); ++i) {
      groups[members[i].subclass.value_or("")].push_back(i);
    }
    std::vector<std::vector<std::size_t>> queues;
    for (auto& [sub, idx] : groups) {
      rng.shuffle(idx);
      queues.push_back(std::move(idx));
    }
    rng.shuffle(queues);

    auto& picked = set.per_class[cls];
    std::vector<std::size_t> cursor(queues.size(), 0);
    std::size_t live = queues.size();
    while (picked.size() < n && live > 0) {
      live = 0;
      for (std::size_t q = 0; q < queues.size() && picked.size() < n; ++q) {
        if (cursor[q] >= queues[q].size()) continue;
        picked.push_back(members[queues[q][cursor[q]++]]);
        if (cursor[q] < queues[q].size()) ++live;
      }
    }
    note_shortfall(set, cls, members.size());
  }
  return set;
}

SeedSet select_expert(const LabeledDataset& pool, const VerdictSheet& verdicts,
                      std::size_t n, ExpertSubStrategy sub_strategy,
                      std::uint64_t rng_seed,
                      const nounlex::PosLexicon& lexicon) {
  std::unordered_set<std::string> known;
  for (const auto& inst : pool.instances) known.insert(inst.id);

  struct Resolution {
    std::optional<Verdict> consensus;
    std::optional<Verdict> unanimous;
    bool disagree = false;
  };
  std::unordered_map<std::string, Resolution> resolved;
  for (const auto& e : verdicts.entries) {
    if (!known.count(e.instance_id)) {
      throw Error(ErrorCode::kNotFound,
                  "verdict references unknown instance '" + e.instance_id + "'");
    }
    Resolution& r = resolved[e.instance_id];
    if (e.annotator == kConsensusAnnotator) {
      r.consensus = e.verdict;
    } else if (!r.unanimous) {
      r.unanimous = e.verdict;
    } else if (*r.unanimous != e.verdict) {
      r.disagree = true;
    }
  }
  std::unordered_set<std::string> good;
  for (const auto& [id, r] : resolved) {
    if (r.consensus) {
      if (*r.consensus == Verdict::kGood) good.insert(id);
      continue;
    }
    if (r.disagree) {
      throw Error(ErrorCode::kConflict,
                  "annotators disagree on '" + id +
                      "' and the sheet has no consensus verdict");
    }
    if (r.unanimous == Verdict::kGood) good.insert(id);
  }

  LabeledDataset restricted;
  restricted.name = pool.name;
  restricted.hierarchy = pool.hierarchy;
  for (const auto& inst : pool.instances) {
    if (inst.role == corpus::Role::kTrain && good.count(inst.id)) {
      restricted.instances.push_back(inst);
    }
  }
  std::map<std::string, std::size_t> good_per_class;
  for (const auto& inst : restricted.instances) ++good_per_class[inst.label];
  for (const auto& cls : pool.hierarchy.classes()) {
    if (!good_per_class.count(cls)) {
      throw Error(ErrorCode::kInsufficientData,
                  "class '" + cls + "' has no good verdicts");
    }
  }

  SeedSet set = sub_strategy == ExpertSubStrategy::kRandom
                    ? select_random(restricted, n, rng_seed)
                    : select_max_nouns(restricted, n, lexicon);
  set.strategy = sub_strategy == ExpertSubStrategy::kRandom
                     ? Strategy::kExpertRandom
                     : Strategy::kExpertNouns;
  return set;
}

SeedSet select(Strategy strategy, const LabeledDataset& pool, std::size_t n,
               std::uint64_t rng_seed, const nounlex::PosLexicon& lexicon,
               const VerdictSheet* verdicts) {
  switch (strategy) {
    case Strategy::kRandom:
      return select_random(pool, n, rng_seed);
    case Strategy::kMaxNouns:
      return select_max_nouns(pool, n, lexicon);
    case Strategy::kSubclass:
      return select_subclass_balanced(pool, n, rng_seed);
    case Strategy::kExpertRandom:
    case Strategy::kExpertNouns:
      if (!verdicts) {
        throw Error(ErrorCode::kUsage,
                    "expert strategies need a verdict sheet");
      }
      return select_expert(pool, *verdicts, n,
                           strategy == Strategy::kExpertRandom
                               ? ExpertSubStrategy::kRandom
                               : ExpertSubStrategy::kMaxNouns,
                           rng_seed, lexicon);
  }
  throw Error(ErrorCode::kUsage, "unknown strategy");
}

}  // namespace augwork::seedselect
