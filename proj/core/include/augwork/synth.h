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

#ifndef AUGWORK_SYNTH_H_
#define AUGWORK_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "augwork/corpus.h"

// Synthetic labeled corpora with disjoint per-class vocabularies.
namespace augwork::synth {

struct SyntheticSpec {
  std::size_t classes = 5;
  std::size_t subclasses_per_class = 2;
  std::size_t words_per_class = 40;
  std::size_t train_per_class = 40;
  std::size_t test_per_class = 20;
  std::size_t domain_per_class = 0;  // unlabeled role=domain texts
  std::size_t min_words = 8;
  std::size_t max_words = 16;
  // Probability that a word comes from the instance's subclass slice of
  // the class vocabulary rather than the whole class vocabulary.
  double subclass_focus = 0.5;
  std::uint64_t rng_seed = 0;
};

// Class names "c0", "c1", ...; subclasses "c0.s0", ...
std::string class_name(std::size_t index);
std::string subclass_name(std::size_t cls, std::size_t sub);

// Lowercase alphabetic words, disjoint across classes.
std::vector<std::string> class_vocabulary(const SyntheticSpec& spec, std::size_t cls);
std::map<std::string, std::set<std::string>> vocabularies(const SyntheticSpec& spec);

corpus::LabeledDataset make_dataset(const SyntheticSpec& spec);

}  // namespace augwork::synth

#endif  // AUGWORK_SYNTH_H_
