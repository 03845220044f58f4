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

#ifndef AUGWORK_GENKIT_H_
#define AUGWORK_GENKIT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "augwork/corpus.h"
#include "augwork/rng.h"
#include "augwork/service_client.h"

namespace augwork::genkit {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

// Token -> probability, sorted by token.
using Distribution = std::vector<std::pair<std::string, double>>;

// Word-level n-gram language model with add-alpha smoothing.
//
// Training pads each text with order-1 BOS markers and appends EOS, so the
// final token of every text contributes a (token -> EOS) count. Counts are
// kept for every context length 0..order-1; a context that was never
// observed backs off to its longest observed suffix, ending at the unigram
// distribution.
class NGramModel {
 public:
  static NGramModel train(const std::vector<std::string>& texts,
                          std::size_t order, double smoothing_alpha);

  std::size_t order() const { return order_; }
  double smoothing_alpha() const { return alpha_; }
  // Observed tokens plus BOS and EOS.
  const std::set<std::string, std::less<>>& vocab() const { return vocab_; }

  // Next-token distribution over vocab minus BOS. Only the last order-1
  // tokens of `context` are used; shorter contexts are BOS-padded.
  Distribution distribution(std::span<const std::string> context) const;
  double probability(std::span<const std::string> context,
                     std::string_view token) const;

  std::size_t count(std::span<const std::string> context,
                    std::string_view token) const;
  std::size_t context_total(std::span<const std::string> context) const;

 private:
  using Context = std::vector<std::string>;
  struct Continuations {
    std::map<std::string, std::size_t, std::less<>> next;
    std::size_t total = 0;
  };

  Context padded(std::span<const std::string> context) const;
  const Continuations* longest_observed(const Context& full) const;

  std::size_t order_ = 2;
  double alpha_ = 0.0;
  std::set<std::string, std::less<>> vocab_;
  std::vector<std::string> predictable_;  // vocab minus BOS, sorted
  std::map<Context, Continuations> counts_;
};

inline NGramModel train_ngram(const std::vector<std::string>& texts,
                              std::size_t order, double smoothing_alpha) {
  return NGramModel::train(texts, order, smoothing_alpha);
}

struct SamplingParams {
  double top_p = 0.9;
  std::size_t max_tokens = 40;
  std::uint64_t rng_seed = 0;
  double temperature = 1.0;

  void validate() const;
  nlohmann::json to_json() const;
  bool operator==(const SamplingParams&) const = default;
};

// Temperature-scales `dist`, keeps the smallest prefix (by probability desc,
// then token asc) whose mass reaches top_p, and renormalizes it. The result
// is in that sorted order. Throws on an empty distribution or one that does
// not sum to 1 within 1e-6.
Distribution nucleus(const Distribution& dist, double top_p,
                     double temperature = 1.0);

std::string nucleus_sample(const Distribution& dist,
                           const SamplingParams& params, Rng& rng);

enum class Regime { kPretrained, kDomain, kPerLabel };
std::string_view to_string(Regime r);
Regime parse_regime(std::string_view s);

struct ExternalBackendConfig {
  std::string endpoint;
  std::string model_name = "gpt2";
  int fine_tune_epochs = 4;
  double learning_rate = 5e-5;
  std::string auth_token_env_var;
  service::RetryPolicy retry;
  std::string cache_dir;  // empty: in-memory cache only

  void validate() const;
  std::optional<std::string> auth_token() const;
};

struct GenerationRequest {
  std::string model;
  std::string label;
  std::string prompt;
  std::size_t max_tokens = 40;
  double top_p = 0.9;
  double temperature = 1.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static GenerationRequest from_json(const nlohmann::json& j);
  bool operator==(const GenerationRequest&) const = default;
};

std::string serialize(const GenerationRequest& request);
GenerationRequest parse_generation_request(std::string_view json);

// Client for the external generation service:
//   POST {endpoint}/generate  -> {"text": str}
//   POST {endpoint}/finetune  -> {"model": str}
class ExternalGenerator {
 public:
  explicit ExternalGenerator(ExternalBackendConfig config,
                             std::shared_ptr<service::Transport> transport = nullptr);

  // Cached by request; a cache hit sends nothing.
  std::string generate(const GenerationRequest& request);
  // Returns the name of the tuned model.
  std::string finetune(const std::vector<std::string>& texts,
                       const std::optional<std::string>& label);

  const ExternalBackendConfig& config() const { return config_; }
  std::size_t requests_sent() const { return client_.requests_sent(); }

 private:
  ExternalBackendConfig config_;
  service::JsonClient client_;
  service::ResponseCache cache_;
};

// call_external: one generation round trip through `generator`.
std::string call_external(ExternalGenerator& generator,
                          const GenerationRequest& request);

struct ExternalModel {
  std::shared_ptr<ExternalGenerator> generator;
  std::string model_name;
};

struct Backend {
  std::string key;
  std::variant<std::shared_ptr<const NGramModel>, ExternalModel> impl;
};

// Maps a label to the backend that generates for it: key "*" for the shared
// pretrained/domain backends, one key per class label for per_label.
class BackendRegistry {
 public:
  BackendRegistry() = default;
  explicit BackendRegistry(Regime regime) : regime_(regime) {}

  Regime regime() const { return regime_; }
  void add(Backend backend);
  // Throws Error(kNotFound) when no backend serves `label`.
  const Backend& resolve(const std::string& label) const;
  const std::map<std::string, Backend>& backends() const { return backends_; }

  // Built-in n-gram backends. pretrained trains on `generic_texts`, domain on
  // `domain_texts`, per_label one model per entry of `label_texts`.
  static BackendRegistry built_in(
      Regime regime,
      const std::map<std::string, std::vector<std::string>>& label_texts,
      const std::vector<std::string>& domain_texts,
      const std::vector<std::string>& generic_texts, std::size_t order,
      double smoothing_alpha);

  // External backends. domain and per_label fine-tune through the service.
  static BackendRegistry external(
      Regime regime, std::shared_ptr<ExternalGenerator> generator,
      const std::map<std::string, std::vector<std::string>>& label_texts,
      const std::vector<std::string>& domain_texts);

 private:
  Regime regime_ = Regime::kPerLabel;
  std::map<std::string, Backend> backends_;
};

struct GeneratedInstance {
  corpus::Instance instance;
  std::string backend;
  SamplingParams params;
  std::size_t ordinal = 0;
};

// Instance JSONL plus {"synthetic": true, "backend", "params"}.
std::string to_json_line(const GeneratedInstance& generated);

struct GenerationResult {
  std::vector<GeneratedInstance> instances;
  std::size_t shortfall = 0;
  std::size_t attempts = 0;
};

// Generates `count` instances for `label`. `seeds` are the label's seed
// instances: shared backends are primed with the first order-1 tokens of a
// randomly chosen seed, and outputs that duplicate a seed text (after
// lowercasing and whitespace collapsing) are rejected. At most 10 * count
// attempts are made; a shortfall is recorded rather than thrown. The RNG
// stream is params.rng_seed XOR fnv1a64(label).
GenerationResult generate(const BackendRegistry& registry,
                          const std::string& label, std::size_t count,
                          const SamplingParams& params,
                          const std::vector<corpus::Instance>& seeds);

}  // namespace augwork::genkit

#endif  // AUGWORK_GENKIT_H_
