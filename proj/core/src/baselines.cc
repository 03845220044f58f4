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

#include "augwork/baselines.h"

#include <fstream>
#include <sstream>

#include "augwork/data_paths.h"
#include "augwork/error.h"
#include "augwork/nounlex.h"
#include "augwork/text.h"

namespace augwork::baselines {

Thesaurus Thesaurus::parse(std::istream& in) {
  Thesaurus t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kMalformedRecord,
                  "thesaurus line " + std::to_string(lineno) + ": expected lemma<TAB>synonyms");
    }
    const std::string lemma = text::lower(text::trim(std::string_view(line).substr(0, tab)));
    auto& list = t.synonyms[lemma];
    std::string_view rest = std::string_view(line).substr(tab + 1);
    while (!rest.empty()) {
      const auto bar = rest.find('|');
      auto item = text::trim(rest.substr(0, bar));
      if (!item.empty()) list.emplace_back(item);
      if (bar == std::string_view::npos) break;
      rest.remove_prefix(bar + 1);
    }
  }
  t.validate();
  return t;
}

Thesaurus Thesaurus::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open thesaurus: " + path);
  return parse(in);
}

Thesaurus Thesaurus::bundled() { return load(data_file("thesaurus.tsv")); }

void Thesaurus::validate() const {
  for (const auto& [lemma, list] : synonyms) {
    if (list.empty()) throw Error(ErrorCode::kInvalidInput, "thesaurus lemma has no synonyms: " + lemma);
    if (list.size() == 1 && text::lower(list.front()) == lemma) {
      throw Error(ErrorCode::kInvalidInput, "thesaurus lemma is its own sole synonym: " + lemma);
    }
  }
}

const std::vector<std::string>* Thesaurus::find(std::string_view lowercase_word) const {
  auto it = synonyms.find(std::string(lowercase_word));
  return it == synonyms.end() ? nullptr : &it->second;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open stopword list: " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::trim(line);
    if (w.empty() || w.front() == '#') continue;
    out.insert(text::lower(w));
  }
  return out;
}

const std::set<std::string>& bundled_stopwords() {
  static const std::set<std::string> words = load_stopwords(data_file("stopwords.txt"));
  return words;
}

void AugmenterConfig::validate() const {
  if (!(replace_rate >= 0.0 && replace_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "replace_rate must lie in [0, 1]");
  }
  if (neighbor_k < 1) throw Error(ErrorCode::kInvalidInput, "neighbor_k must be at least 1");
}

std::string splice_tokens(std::string_view text, const std::vector<nounlex::Token>& tokens,
                          const std::vector<std::string>& replacements) {
  std::string out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.append(text.substr(pos, tokens[i].begin - pos));
    if (i < replacements.size() && !replacements[i].empty()) {
      out.append(replacements[i]);
    } else {
      out.append(text.substr(tokens[i].begin, tokens[i].end - tokens[i].begin));
    }
    pos = tokens[i].end;
  }
  out.append(text.substr(pos));
  return out;
}

std::string hyphen_join(std::string_view phrase) {
  std::string out;
  bool pending = false;
  for (char c : text::trim(phrase)) {
    if (c == ' ' || c == '\t') {
      pending = true;
      continue;
    }
    if (pending) out.push_back('-');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::string synonym_replace(std::string_view text, const Thesaurus& thesaurus,
                            const AugmenterConfig& cfg) {
  Rng rng(cfg.rng_seed);
  return synonym_replace(text, thesaurus, cfg, rng);
}

std::string synonym_replace(std::string_view text, const Thesaurus& thesaurus,
                            const AugmenterConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.replace_rate == 0.0) return std::string(text);
  const auto tokens = nounlex::tokenize_spans(text);
  std::vector<std::string> replacements(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto* syns = thesaurus.find(text::lower(tokens[i].text));
    if (!syns || !rng.bernoulli(cfg.replace_rate)) continue;
    const auto& pick = (*syns)[rng.uniform_index(syns->size())];
    replacements[i] = text::match_initial_case(tokens[i].text, hyphen_join(pick));
  }
  return splice_tokens(text, tokens, replacements);
}

EmbeddingReplacer::EmbeddingReplacer(const textmodel::EmbeddingModel& embedding,
                                     std::set<std::string> stopwords)
    : index_(embedding), stopwords_(std::move(stopwords)) {}

bool EmbeddingReplacer::eligible(std::string_view lowercase_word) const {
  return index_.contains(lowercase_word) && !stopwords_.count(std::string(lowercase_word));
}

std::string EmbeddingReplacer::replace(std::string_view text, const AugmenterConfig& cfg) const {
  Rng rng(cfg.rng_seed);
  return replace(text, cfg, rng);
}

std::string EmbeddingReplacer::replace(std::string_view text, const AugmenterConfig& cfg,
                                       Rng& rng) const {
  cfg.validate();
  if (cfg.replace_rate == 0.0) return std::string(text);
  const auto tokens = nounlex::tokenize_spans(text);
  std::vector<std::string> replacements(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string low = text::lower(tokens[i].text);
    if (!eligible(low) || !rng.bernoulli(cfg.replace_rate)) continue;
    const auto neighbors = index_.nearest(low, cfg.neighbor_k);
    if (neighbors.empty()) continue;
    const auto& pick = neighbors[rng.uniform_index(neighbors.size())].first;
    replacements[i] = text::match_initial_case(tokens[i].text, pick);
  }
  return splice_tokens(text, tokens, replacements);
}

std::string embedding_replace(std::string_view text, const textmodel::EmbeddingModel& embedding,
                              const AugmenterConfig& cfg) {
  return EmbeddingReplacer(embedding).replace(text, cfg);
}

nlohmann::json MaskFillRequest::to_json() const {
  return {{"text", text}, {"mask_index", mask_index}};
}

MaskFillRequest MaskFillRequest::from_json(const nlohmann::json& j) {
  try {
    return {j.at("text").get<std::string>(), j.at("mask_index").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("mask-fill request: ") + e.what());
  }
}

nlohmann::json TranslateRequest::to_json() const {
  return {{"text", text}, {"source", source}, {"target", target}};
}

TranslateRequest TranslateRequest::from_json(const nlohmann::json& j) {
  try {
    return {j.at("text").get<std::string>(), j.at("source").get<std::string>(),
            j.at("target").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("translate request: ") + e.what());
  }
}

namespace {

std::shared_ptr<service::Transport> resolve_transport(const genkit::ExternalBackendConfig& cfg,
                                                      std::shared_ptr<service::Transport> t) {
  if (t) return t;
  return service::make_http_transport(service::Endpoint::parse(cfg.endpoint));
}

std::string string_field(const nlohmann::json& response, const char* field, const char* path) {
  auto it = response.find(field);
  if (it == response.end() || !it->is_string()) {
    throw Error(ErrorCode::kProtocol, std::string(path) + " response is missing '" + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

ServiceAugmenter::ServiceAugmenter(genkit::ExternalBackendConfig config,
                                   std::shared_ptr<service::Transport> transport)
    : config_((config.validate(), std::move(config))),
      client_(resolve_transport(config_, std::move(transport)),
              service::Endpoint::parse(config_.endpoint).base_path, config_.retry,
              config_.auth_token()),
      cache_(config_.cache_dir) {}

std::string ServiceAugmenter::fill(const MaskFillRequest& request) {
  const auto body = request.to_json();
  const std::string scope = config_.endpoint + "/fill";
  if (auto hit = cache_.get(scope, body)) return hit->at("token").get<std::string>();
  const auto response = client_.post("/fill", body);
  const std::string token = string_field(response, "token", "/fill");
  cache_.put(scope, body, {{"token", token}});
  return token;
}

std::string ServiceAugmenter::translate(const TranslateRequest& request) {
  const auto body = request.to_json();
  const std::string scope = config_.endpoint + "/translate";
  if (auto hit = cache_.get(scope, body)) return hit->at("text").get<std::string>();
  const auto response = client_.post("/translate", body);
  const std::string out = string_field(response, "text", "/translate");
  if (text::trim(out).empty()) {
    throw Error(ErrorCode::kProtocol, "translation service returned an empty text");
  }
  cache_.put(scope, body, {{"text", out}});
  return out;
}

std::string mlm_replace(std::string_view text, ServiceAugmenter& service,
                        const AugmenterConfig& cfg) {
  Rng rng(cfg.rng_seed);
  return mlm_replace(text, service, cfg, rng);
}

std::string mlm_replace(std::string_view text, ServiceAugmenter& service,
                        const AugmenterConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.replace_rate == 0.0) return std::string(text);
  const auto tokens = nounlex::tokenize_spans(text);
  std::vector<std::string> replacements(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!rng.bernoulli(cfg.replace_rate)) continue;
    const std::string current = splice_tokens(text, tokens, replacements);
    const std::string fill = hyphen_join(service.fill({current, i}));
    if (fill.empty() || text::lower(fill) == text::lower(tokens[i].text)) continue;
    replacements[i] = text::match_initial_case(tokens[i].text, fill);
  }
  return splice_tokens(text, tokens, replacements);
}

std::string back_translate(std::string_view text, ServiceAugmenter& service,
                           const std::string& source, const std::string& pivot) {
  const std::string there = service.translate({std::string(text), source, pivot});
  return service.translate({there, pivot, source});
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kSynonyms: return "synonyms";
    case Method::kEmbeddings: return "embeddings";
    case Method::kMlm: return "mlm";
    case Method::kTranslate: return "translate";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "synonyms") return Method::kSynonyms;
  if (s == "embeddings") return Method::kEmbeddings;
  if (s == "mlm") return Method::kMlm;
  if (s == "translate") return Method::kTranslate;
  throw Error(ErrorCode::kUsage, "unknown augmentation method: " + std::string(s));
}

std::string augment_text(std::string_view text, Method method, const AugmentContext& ctx,
                         const AugmenterConfig& cfg, Rng& rng) {
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidInput, std::string(what) + " not provided");
  };
  switch (method) {
    case Method::kSynonyms:
      need(ctx.thesaurus, "thesaurus");
      return synonym_replace(text, *ctx.thesaurus, cfg, rng);
    case Method::kEmbeddings:
      need(ctx.embeddings, "embedding model");
      return ctx.embeddings->replace(text, cfg, rng);
    case Method::kMlm:
      need(ctx.service, "mask-fill service");
      return mlm_replace(text, *ctx.service, cfg, rng);
    case Method::kTranslate:
      need(ctx.service, "translation service");
      return back_translate(text, *ctx.service);
  }
  return std::string(text);
}

std::vector<corpus::Instance> augment(const std::vector<corpus::Instance>& seeds,
                                      std::size_t count, Method method,
                                      const AugmentContext& ctx, const AugmenterConfig& cfg) {
  std::vector<corpus::Instance> out;
  if (count == 0) return out;
  if (seeds.empty()) throw Error(ErrorCode::kInsufficientData, "no seed instances to augment");
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& src = seeds[i % seeds.size()];
    Rng rng(derive_seed(cfg.rng_seed, "augment:" + src.id, i));
    corpus::Instance inst = src;
    inst.text = augment_text(src.text, method, ctx, cfg, rng);
    inst.id = "aug:" + std::string(to_string(method)) + ":" + std::to_string(i) + ":" + src.id;
    inst.role = corpus::Role::kTrain;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace augwork::baselines
