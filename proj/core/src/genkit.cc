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

#include "augwork/genkit.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_set>

#include "augwork/error.h"
#include "augwork/nounlex.h"
#include "augwork/text.h"

namespace augwork::genkit {

NGramModel NGramModel::train(const std::vector<std::string>& texts,
                             std::size_t order, double smoothing_alpha) {
  if (order < 2) throw Error(ErrorCode::kInvalidInput, "n-gram order must be >= 2");
  if (!(smoothing_alpha >= 0.0) || !std::isfinite(smoothing_alpha)) {
    throw Error(ErrorCode::kInvalidInput, "smoothing alpha must be >= 0");
  }
  NGramModel m;
  m.order_ = order;
  m.alpha_ = smoothing_alpha;
  m.vocab_.emplace(kBos);
  m.vocab_.emplace(kEos);

  std::size_t token_count = 0;
  for (const auto& t : texts) {
    std::vector<std::string> seq(order - 1, std::string(kBos));
    for (auto& tok : nounlex::tokenize(t)) {
      m.vocab_.insert(tok);
      seq.push_back(std::move(tok));
      ++token_count;
    }
    if (seq.size() == order - 1) continue;  // no tokens in this text
    seq.emplace_back(kEos);
    for (std::size_t i = order - 1; i < seq.size(); ++i) {
      for (std::size_t len = 0; len < order; ++len) {
        Context ctx(seq.begin() + static_cast<std::ptrdiff_t>(i - len),
                    seq.begin() + static_cast<std::ptrdiff_t>(i));
        Continuations& c = m.counts_[std::move(ctx)];
        ++c.next[seq[i]];
        ++c.total;
      }
    }
  }
  if (token_count == 0) {
    throw Error(ErrorCode::kInvalidInput, "cannot train an n-gram model on an empty corpus");
  }
  for (const auto& tok : m.vocab_) {
    if (tok != kBos) m.predictable_.push_back(tok);
  }
  return m;
}

NGramModel::Context NGramModel::padded(std::span<const std::string> context) const {
  const std::size_t want = order_ - 1;
  Context full;
  full.reserve(want);
  if (context.size() < want) {
    full.assign(want - context.size(), std::string(kBos));
    full.insert(full.end(), context.begin(), context.end());
  } else {
    full.assign(context.end() - static_cast<std::ptrdiff_t>(want), context.end());
  }
  return full;
}

const NGramModel::Continuations* NGramModel::longest_observed(
    const Context& full) const {
  for (std::size_t len = full.size() + 1; len-- > 0;) {
    Context ctx(full.end() - static_cast<std::ptrdiff_t>(len), full.end());
    auto it = counts_.find(ctx);
    if (it != counts_.end() && it->second.total > 0) return &it->second;
  }
  return nullptr;
}

Distribution NGramModel::distribution(std::span<const std::string> context) const {
  const Continuations* c = longest_observed(padded(context));
  Distribution dist;
  dist.reserve(predictable_.size());
  const double denom =
      static_cast<double>(c->total) + alpha_ * static_cast<double>(predictable_.size());
  for (const auto& tok : predictable_) {
    auto it = c->next.find(tok);
    const double n = it == c->next.end() ? 0.0 : static_cast<double>(it->second);
    dist.emplace_back(tok, (n + alpha_) / denom);
  }
  return dist;
}

double NGramModel::probability(std::span<const std::string> context,
                               std::string_view token) const {
  for (const auto& [tok, p] : distribution(context)) {
    if (tok == token) return p;
  }
  return 0.0;
}

std::size_t NGramModel::count(std::span<const std::string> context,
                              std::string_view token) const {
  auto it = counts_.find(Context(context.begin(), context.end()));
  if (it == counts_.end()) return 0;
  auto jt = it->second.next.find(token);
  return jt == it->second.next.end() ? 0 : jt->second;
}

std::size_t NGramModel::context_total(std::span<const std::string> context) const {
  auto it = counts_.find(Context(context.begin(), context.end()));
  return it == counts_.end() ? 0 : it->second.total;
}

void SamplingParams::validate() const {
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "top_p must be in (0, 1]");
  }
  if (max_tokens < 1) throw Error(ErrorCode::kInvalidInput, "max_tokens must be >= 1");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidInput, "temperature must be > 0");
  }
}

nlohmann::json SamplingParams::to_json() const {
  return {{"top_p", top_p},
          {"max_tokens", max_tokens},
          {"seed", rng_seed},
          {"temperature", temperature}};
}

Distribution nucleus(const Distribution& dist, double top_p, double temperature) {
  if (dist.empty()) throw Error(ErrorCode::kInvalidInput, "empty distribution");
  double sum = 0.0;
  for (const auto& [tok, p] : dist) {
    if (!(p >= 0.0)) throw Error(ErrorCode::kInvalidInput, "negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidInput, "distribution does not sum to 1");
  }
  Distribution sorted = dist;
  if (temperature != 1.0) {
    double z = 0.0;
    for (auto& [tok, p] : sorted) {
      p = p > 0.0 ? std::pow(p, 1.0 / temperature) : 0.0;
      z += p;
    }
    for (auto& [tok, p] : sorted) p /= z;
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  // Tolerance keeps top_p = 1 from dropping the tail to rounding.
  constexpr double kEps = 1e-12;
  double mass = 0.0;
  std::size_t keep = 0;
  while (keep < sorted.size()) {
    mass += sorted[keep].second;
    ++keep;
    if (mass >= top_p - kEps) break;
  }
  sorted.resize(keep);
  for (auto& [tok, p] : sorted) p /= mass;
  return sorted;
}

std::string nucleus_sample(const Distribution& dist, const SamplingParams& params,
                           Rng& rng) {
  const Distribution kept = nucleus(dist, params.top_p, params.temperature);
  const double u = rng.uniform_real();
  double acc = 0.0;
  for (const auto& [tok, p] : kept) {
    acc += p;
    if (u < acc) return tok;
  }
  return kept.back().first;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kPretrained: return "pretrained";
    case Regime::kDomain: return "domain";
    case Regime::kPerLabel: return "per_label";
  }
  return "per_label";
}

Regime parse_regime(std::string_view s) {
  if (s == "pretrained" || s == "gen") return Regime::kPretrained;
  if (s == "domain" || s == "dom") return Regime::kDomain;
  if (s == "per_label" || s == "per-label" || s == "label") return Regime::kPerLabel;
  throw Error(ErrorCode::kUsage, "unknown regime '" + std::string(s) + "'");
}

void ExternalBackendConfig::validate() const {
  service::Endpoint::parse(endpoint);
  if (fine_tune_epochs < 1) {
    throw Error(ErrorCode::kInvalidInput, "fine_tune_epochs must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "learning_rate must be > 0");
  }
}

std::optional<std::string> ExternalBackendConfig::auth_token() const {
  if (auth_token_env_var.empty()) return std::nullopt;
  const char* v = std::getenv(auth_token_env_var.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

nlohmann::json GenerationRequest::to_json() const {
  return {{"model", model},         {"label", label},
          {"prompt", prompt},       {"max_tokens", max_tokens},
          {"top_p", top_p},         {"temperature", temperature},
          {"seed", seed}};
}

GenerationRequest GenerationRequest::from_json(const nlohmann::json& j) {
  try {
    GenerationRequest r;
    r.model = j.at("model").get<std::string>();
    r.label = j.at("label").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.max_tokens = j.at("max_tokens").get<std::size_t>();
    r.top_p = j.at("top_p").get<double>();
    r.temperature = j.at("temperature").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("generation request: ") + e.what());
  }
}

std::string serialize(const GenerationRequest& request) {
  return request.to_json().dump();
}

GenerationRequest parse_generation_request(std::string_view json) {
  try {
    return GenerationRequest::from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kProtocol, std::string("generation request: ") + e.what());
  }
}

namespace {

std::shared_ptr<service::Transport> transport_for(
    const ExternalBackendConfig& config,
    std::shared_ptr<service::Transport> transport) {
  if (transport) return transport;
  return service::make_http_transport(service::Endpoint::parse(config.endpoint));
}

}  // namespace

ExternalGenerator::ExternalGenerator(ExternalBackendConfig config,
                                     std::shared_ptr<service::Transport> transport)
    : config_((config.validate(), std::move(config))),
      client_(transport_for(config_, std::move(transport)),
              service::Endpoint::parse(config_.endpoint).base_path, config_.retry,
              config_.auth_token()),
      cache_(config_.cache_dir) {}

std::string ExternalGenerator::generate(const GenerationRequest& request) {
  const nlohmann::json body = request.to_json();
  const std::string scope = config_.endpoint + "/generate";
  if (auto hit = cache_.get(scope, body)) return hit->at("text").get<std::string>();
  nlohmann::json response = client_.post("/generate", body);
  auto it = response.find("text");
  if (it == response.end() || !it->is_string()) {
    throw Error(ErrorCode::kProtocol, "/generate response is missing 'text'");
  }
  cache_.put(scope, body, {{"text", *it}});
  return it->get<std::string>();
}

std::string ExternalGenerator::finetune(const std::vector<std::string>& texts,
                                        const std::optional<std::string>& label) {
  nlohmann::json body = {{"model", config_.model_name},
                         {"texts", texts},
                         {"epochs", config_.fine_tune_epochs},
                         {"learning_rate", config_.learning_rate}};
  if (label) body["label"] = *label;
  const std::string scope = config_.endpoint + "/finetune";
  if (auto hit = cache_.get(scope, body)) return hit->at("model").get<std::string>();
  nlohmann::json response = client_.post("/finetune", body);
  auto it = response.find("model");
  if (it == response.end() || !it->is_string()) {
    throw Error(ErrorCode::kProtocol, "/finetune response is missing 'model'");
  }
  cache_.put(scope, body, {{"model", *it}});
  return it->get<std::string>();
}

std::string call_external(ExternalGenerator& generator,
                          const GenerationRequest& request) {
  return generator.generate(request);
}

void BackendRegistry::add(Backend backend) {
  std::string key = backend.key;
  backends_.insert_or_assign(std::move(key), std::move(backend));
}

const Backend& BackendRegistry::resolve(const std::string& label) const {
  const std::string key = regime_ == Regime::kPerLabel ? label : "*";
  auto it = backends_.find(key);
  if (it == backends_.end()) {
    throw Error(ErrorCode::kNotFound, "no generation backend for label '" + label + "'");
  }
  return it->second;
}

BackendRegistry BackendRegistry::built_in(
    Regime regime, const std::map<std::string, std::vector<std::string>>& label_texts,
    const std::vector<std::string>& domain_texts,
    const std::vector<std::string>& generic_texts, std::size_t order,
    double smoothing_alpha) {
  BackendRegistry reg(regime);
  switch (regime) {
    case Regime::kPretrained:
      reg.add({"*", std::make_shared<const NGramModel>(
                        NGramModel::train(generic_texts, order, smoothing_alpha))});
      break;
    case Regime::kDomain:
      reg.add({"*", std::make_shared<const NGramModel>(
                        NGramModel::train(domain_texts, order, smoothing_alpha))});
      break;
    case Regime::kPerLabel:
      for (const auto& [label, texts] : label_texts) {
        reg.add({label, std::make_shared<const NGramModel>(
                            NGramModel::train(texts, order, smoothing_alpha))});
      }
      break;
  }
  return reg;
}

BackendRegistry BackendRegistry::external(
    Regime regime, std::shared_ptr<ExternalGenerator> generator,
    const std::map<std::string, std::vector<std::string>>& label_texts,
    const std::vector<std::string>& domain_texts) {
  BackendRegistry reg(regime);
  switch (regime) {
    case Regime::kPretrained:
      reg.add({"*", ExternalModel{generator, generator->config().model_name}});
      break;
    case Regime::kDomain:
      reg.add({"*", ExternalModel{generator, generator->finetune(domain_texts, std::nullopt)}});
      break;
    case Regime::kPerLabel:
      for (const auto& [label, texts] : label_texts) {
        reg.add({label, ExternalModel{generator, generator->finetune(texts, label)}});
      }
      break;
  }
  return reg;
}

std::string to_json_line(const GeneratedInstance& g) {
  nlohmann::json obj = nlohmann::json::parse(corpus::to_json_line(g.instance));
  obj["synthetic"] = true;
  obj["backend"] = g.backend;
  obj["params"] = g.params.to_json();
  obj["ordinal"] = g.ordinal;
  return obj.dump();
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string sample_ngram(const NGramModel& model, bool primed,
                         const std::vector<corpus::Instance>& seeds,
                         const SamplingParams& params, Rng& rng) {
  std::vector<std::string> tokens;
  if (primed && !seeds.empty()) {
    const auto& seed = seeds[rng.uniform_index(seeds.size())];
    auto seed_tokens = nounlex::tokenize(seed.text);
    const std::size_t n = std::min(model.order() - 1, seed_tokens.size());
    tokens.assign(seed_tokens.begin(), seed_tokens.begin() + static_cast<std::ptrdiff_t>(n));
  }
  for (std::size_t step = 0; step < params.max_tokens; ++step) {
    std::string next = nucleus_sample(model.distribution(tokens), params, rng);
    if (next == kEos) break;
    tokens.push_back(std::move(next));
  }
  return join_tokens(tokens);
}

}  // namespace

GenerationResult generate(const BackendRegistry& registry, const std::string& label,
                          std::size_t count, const SamplingParams& params,
                          const std::vector<corpus::Instance>& seeds) {
  params.validate();
  GenerationResult result;
  if (count == 0) return result;
  const Backend& backend = registry.resolve(label);
  const bool primed = registry.regime() != Regime::kPerLabel;

  std::unordered_set<std::string> seen;
  for (const auto& s : seeds) seen.insert(text::normalize_for_dedup(s.text));

  Rng rng(params.rng_seed ^ fnv1a64(label));
  const std::size_t cap = 10 * count;
  while (result.instances.size() < count && result.attempts < cap) {
    ++result.attempts;
    std::string out;
    if (const auto* ngram = std::get_if<std::shared_ptr<const NGramModel>>(&backend.impl)) {
      out = sample_ngram(**ngram, primed, seeds, params, rng);
    } else {
      const auto& ext = std::get<ExternalModel>(backend.impl);
      GenerationRequest req;
      req.model = ext.model_name;
      req.label = label;
      if (!seeds.empty()) req.prompt = seeds[rng.uniform_index(seeds.size())].text;
      req.max_tokens = params.max_tokens;
      req.top_p = params.top_p;
      req.temperature = params.temperature;
      req.seed = rng.next();
      out = std::string(text::trim(ext.generator->generate(req)));
    }
    if (text::trim(out).empty()) continue;
    if (seen.count(text::normalize_for_dedup(out))) continue;

    GeneratedInstance g;
    g.ordinal = result.instances.size();
    g.instance.id = "gen:" + label + ":" + std::to_string(g.ordinal);
    g.instance.text = std::move(out);
    g.instance.label = label;
    g.instance.unit = seeds.empty() ? corpus::Unit::kPassage : seeds.front().unit;
    g.backend = backend.key;
    g.params = params;
    result.instances.push_back(std::move(g));
  }
  result.shortfall = count - result.instances.size();
  return result;
}

}  // namespace augwork::genkit
