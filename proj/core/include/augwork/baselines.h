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

#ifndef AUGWORK_BASELINES_H_
#define AUGWORK_BASELINES_H_

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "augwork/corpus.h"
#include "augwork/genkit.h"
#include "augwork/nounlex.h"
#include "augwork/rng.h"
#include "augwork/service_client.h"
#include "augwork/textmodel.h"

// Word-replacement and back-translation augmenters.
namespace augwork::baselines {

struct Thesaurus {
  std::map<std::string, std::vector<std::string>> synonyms;

  // TSV lines "lemma<TAB>syn1|syn2|..."; '#' starts a comment line.
  static Thesaurus parse(std::istream& in);
  static Thesaurus load(const std::string& path);
  static Thesaurus bundled();
  // Throws Error(kInvalidInput) on an empty list or a lemma that is its
  // own sole synonym.
  void validate() const;
  const std::vector<std::string>* find(std::string_view lowercase_word) const;
};

std::set<std::string> load_stopwords(const std::string& path);
const std::set<std::string>& bundled_stopwords();

struct AugmenterConfig {
  double replace_rate = 0.1;
  std::uint64_t rng_seed = 0;
  std::size_t neighbor_k = 5;

  void validate() const;
};

// Rebuilds `text` with token i replaced by replacements[i] when non-empty,
// keeping everything between tokens verbatim.
std::string splice_tokens(std::string_view text, const std::vector<nounlex::Token>& tokens,
                          const std::vector<std::string>& replacements);

// Spaces inside a multi-word replacement become hyphens.
std::string hyphen_join(std::string_view phrase);

std::string synonym_replace(std::string_view text, const Thesaurus& thesaurus,
                            const AugmenterConfig& cfg);
std::string synonym_replace(std::string_view text, const Thesaurus& thesaurus,
                            const AugmenterConfig& cfg, Rng& rng);

class EmbeddingReplacer {
 public:
  EmbeddingReplacer(const textmodel::EmbeddingModel& embedding,
                    std::set<std::string> stopwords = bundled_stopwords());

  // In vocabulary and not a stopword.
  bool eligible(std::string_view lowercase_word) const;
  std::string replace(std::string_view text, const AugmenterConfig& cfg) const;
  std::string replace(std::string_view text, const AugmenterConfig& cfg, Rng& rng) const;

 private:
  textmodel::NeighborIndex index_;
  std::set<std::string> stopwords_;
};

std::string embedding_replace(std::string_view text, const textmodel::EmbeddingModel& embedding,
                              const AugmenterConfig& cfg);

struct MaskFillRequest {
  std::string text;
  std::size_t mask_index = 0;

  nlohmann::json to_json() const;
  static MaskFillRequest from_json(const nlohmann::json& j);
  bool operator==(const MaskFillRequest&) const = default;
};

struct TranslateRequest {
  std::string text;
  std::string source;
  std::string target;

  nlohmann::json to_json() const;
  static TranslateRequest from_json(const nlohmann::json& j);
  bool operator==(const TranslateRequest&) const = default;
};

// Client for the mask-fill (/fill) and translation (/translate) services.
class ServiceAugmenter {
 public:
  explicit ServiceAugmenter(genkit::ExternalBackendConfig config,
                            std::shared_ptr<service::Transport> transport = nullptr);

  std::string fill(const MaskFillRequest& request);
  // Throws Error(kProtocol) on an empty translation.
  std::string translate(const TranslateRequest& request);
  std::size_t requests_sent() const { return client_.requests_sent(); }

 private:
  genkit::ExternalBackendConfig config_;
  service::JsonClient client_;
  service::ResponseCache cache_;
};

// Each token is selected with probability replace_rate; selected tokens are
// masked one at a time against the current text and replaced by the fill
// when it differs from the original token.
std::string mlm_replace(std::string_view text, ServiceAugmenter& service,
                        const AugmenterConfig& cfg);
std::string mlm_replace(std::string_view text, ServiceAugmenter& service,
                        const AugmenterConfig& cfg, Rng& rng);

// source -> pivot -> source.
std::string back_translate(std::string_view text, ServiceAugmenter& service,
                           const std::string& source = "en", const std::string& pivot = "de");

enum class Method { kSynonyms, kEmbeddings, kMlm, kTranslate };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct AugmentContext {
  const Thesaurus* thesaurus = nullptr;
  const EmbeddingReplacer* embeddings = nullptr;
  ServiceAugmenter* service = nullptr;
};

// One augmented copy per seed instance, cycling through `seeds` until `count`
// copies exist. Label and subclass are carried over; ids read
// "aug:<method>:<ordinal>:<seed id>". Each copy draws from a stream derived
// from (cfg.rng_seed, seed id, ordinal).
std::vector<corpus::Instance> augment(const std::vector<corpus::Instance>& seeds,
                                      std::size_t count, Method method,
                                      const AugmentContext& ctx, const AugmenterConfig& cfg);

std::string augment_text(std::string_view text, Method method, const AugmentContext& ctx,
                         const AugmenterConfig& cfg, Rng& rng);

}  // namespace augwork::baselines

#endif  // AUGWORK_BASELINES_H_
