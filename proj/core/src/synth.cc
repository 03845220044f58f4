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

#include "augwork/synth.h"

#include <algorithm>

#include "augwork/error.h"
#include "augwork/rng.h"

namespace augwork::synth {
namespace {

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};

// Class letter prefix keeps vocabularies disjoint; the syllables make the
// words look like ordinary lowercase tokens.
std::string word_for(std::size_t cls, std::size_t j) {
  std::string w;
  w += static_cast<char>('a' + cls % 26);
  if (cls >= 26) w += static_cast<char>('a' + (cls / 26) % 26);
  std::size_t x = j;
  do {
    w += kOnsets[x % 14];
    x /= 14;
    w += kVowels[x % 5];
    x /= 5;
  } while (x > 0);
  return w;
}

}  // namespace

std::string class_name(std::size_t index) { return "c" + std::to_string(index); }

std::string subclass_name(std::size_t cls, std::size_t sub) {
  return class_name(cls) + ".s" + std::to_string(sub);
}

std::vector<std::string> class_vocabulary(const SyntheticSpec& spec, std::size_t cls) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < spec.words_per_class; ++j) out.push_back(word_for(cls, j));
  return out;
}

std::map<std::string, std::set<std::string>> vocabularies(const SyntheticSpec& spec) {
  std::map<std::string, std::set<std::string>> out;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    const auto v = class_vocabulary(spec, c);
    out[class_name(c)] = std::set<std::string>(v.begin(), v.end());
  }
  return out;
}

corpus::LabeledDataset make_dataset(const SyntheticSpec& spec) {
  if (spec.classes < 2 || spec.words_per_class == 0 || spec.min_words == 0 ||
      spec.max_words < spec.min_words) {
    throw Error(ErrorCode::kInvalidInput, "invalid synthetic dataset spec");
  }
  const std::size_t subs = std::max<std::size_t>(1, spec.subclasses_per_class);
  corpus::LabeledDataset ds;
  ds.name = "synthetic";
  Rng rng(derive_seed(spec.rng_seed, "synth"));
  std::size_t ordinal = 0;
  auto text_for = [&](std::size_t c, std::size_t s) {
    const auto vocab = class_vocabulary(spec, c);
    const std::size_t slice = std::max<std::size_t>(1, vocab.size() / subs);
    const std::size_t len =
        spec.min_words + rng.uniform_index(spec.max_words - spec.min_words + 1);
    std::string t;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t j;
      if (rng.bernoulli(spec.subclass_focus)) {
        j = std::min(vocab.size() - 1, s * slice + rng.uniform_index(slice));
      } else {
        j = rng.uniform_index(vocab.size());
      }
      if (i) t += ' ';
      t += vocab[j];
    }
    return t;
  };
  for (std::size_t c = 0; c < spec.classes; ++c) {
    ds.hierarchy.add_class(class_name(c));
    for (std::size_t s = 0; s < subs; ++s) ds.hierarchy.add_subclass(subclass_name(c, s), class_name(c));
  }
  auto emit = [&](corpus::Role role, std::size_t per_class) {
    for (std::size_t c = 0; c < spec.classes; ++c) {
      for (std::size_t i = 0; i < per_class; ++i) {
        const std::size_t s = i % subs;
        corpus::Instance inst;
        inst.id = "s" + std::to_string(ordinal++);
        inst.text = text_for(c, s);
        inst.role = role;
        if (role != corpus::Role::kDomain) {
          inst.label = class_name(c);
          inst.subclass = subclass_name(c, s);
        }
        ds.instances.push_back(std::move(inst));
      }
    }
  };
  emit(corpus::Role::kTrain, spec.train_per_class);
  emit(corpus::Role::kTest, spec.test_per_class);
  emit(corpus::Role::kDomain, spec.domain_per_class);
  return ds;
}

}  // namespace augwork::synth
