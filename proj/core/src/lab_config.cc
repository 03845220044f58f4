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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "augwork/error.h"
#include "augwork/lab.h"

namespace augwork::lab {
namespace {

nlohmann::json to_json_value(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = to_json_value(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : *a) out.push_back(to_json_value(v));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  throw Error(ErrorCode::kInvalidInput, "unsupported TOML value type in experiment config");
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& dst) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    dst = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kInvalidInput, std::string("config field '") + key + "' has the wrong type");
  }
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

nlohmann::json backend_json(const genkit::ExternalBackendConfig& b) {
  return {{"kind", "external"},
          {"endpoint", b.endpoint},
          {"model_name", b.model_name},
          {"fine_tune_epochs", b.fine_tune_epochs},
          {"learning_rate", b.learning_rate},
          {"auth_token_env_var", b.auth_token_env_var},
          {"cache_dir", b.cache_dir},
          {"retry_attempts", b.retry.attempts},
          {"retry_backoff_ms", b.retry.initial_backoff.count()}};
}

genkit::ExternalBackendConfig backend_from(const nlohmann::json& j) {
  genkit::ExternalBackendConfig b;
  read(j, "endpoint", b.endpoint);
  read(j, "model_name", b.model_name);
  read(j, "fine_tune_epochs", b.fine_tune_epochs);
  read(j, "learning_rate", b.learning_rate);
  read(j, "auth_token_env_var", b.auth_token_env_var);
  read(j, "cache_dir", b.cache_dir);
  read(j, "retry_attempts", b.retry.attempts);
  long long backoff = b.retry.initial_backoff.count();
  read(j, "retry_backoff_ms", backoff);
  b.retry.initial_backoff = std::chrono::milliseconds(backoff);
  return b;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  // A desk-sized bucket table; the lab trains one embedding per run.
  embedding.bucket_count = 200'000;
}

std::vector<std::pair<std::size_t, std::size_t>> default_pairs(
    const std::vector<std::size_t>& base_sizes, const std::vector<std::size_t>& add_sizes) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto b : base_sizes) {
    for (auto a : add_sizes) {
      if (a >= b && a <= 2 * b) out.emplace_back(b, a);
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::kInvalidInput, "iterations must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kInvalidInput, "alpha must lie in (0, 1)");
  if (pairs.empty()) throw Error(ErrorCode::kInvalidInput, "no (base, add) pairs configured");
  for (const auto& [b, a] : pairs) {
    if (b == 0) throw Error(ErrorCode::kInvalidInput, "base size must be positive");
    (void)a;
  }
  if (generator.order < 2) throw Error(ErrorCode::kInvalidInput, "generator order must be >= 2");
  if (!(dataset.test_fraction > 0.0 && dataset.test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "test_fraction must lie in (0, 1)");
  }
  augment.validate();
  if (backend) backend->validate();
  if (augment_service) augment_service->validate();
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["dataset"] = {{"path", dataset.path},
                  {"format", dataset.format == corpus::Format::kCsv ? "csv" : "jsonl"},
                  {"name", dataset.name},
                  {"unit", corpus::to_string(dataset.unit)},
                  {"hierarchy", dataset.hierarchy_path},
                  {"split_sentences", dataset.split_sentences},
                  {"test_fraction", dataset.test_fraction}};
  j["pairs"] = nlohmann::json::array();
  for (const auto& [b, a] : pairs) j["pairs"].push_back({b, a});
  j["strategies"] = nlohmann::json::array();
  for (auto s : strategies) j["strategies"].push_back(seedselect::to_string(s));
  j["regimes"] = nlohmann::json::array();
  for (auto r : regimes) j["regimes"].push_back(genkit::to_string(r));
  j["baselines"] = nlohmann::json::array();
  for (auto m : baselines) j["baselines"].push_back(baselines::to_string(m));
  j["upperbound"] = upperbound;
  j["iterations"] = iterations;
  j["alpha"] = alpha;
  j["rng_seed"] = rng_seed;
  j["redraw_base"] = redraw_base;
  j["threads"] = threads;
  j["generator"] = {{"order", generator.order},
                    {"smoothing_alpha", generator.smoothing_alpha},
                    {"top_p", generator.top_p},
                    {"max_tokens", generator.max_tokens},
                    {"temperature", generator.temperature}};
  j["backend"] = backend ? backend_json(*backend) : nlohmann::json{{"kind", "built_in"}};
  j["augment"] = {{"replace_rate", augment.replace_rate}, {"neighbor_k", augment.neighbor_k}};
  if (augment_service) j["augment"]["service"] = backend_json(*augment_service);
  j["embedding"] = embedding.to_json();
  j["embedding"].erase("rng_seed");
  j["classifier"] = classifier.to_json();
  j["classifier"].erase("rng_seed");
  j["verdicts"] = verdicts_path;
  j["generic_corpus"] = generic_corpus_path;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "experiment config must be a table");
  if (auto d = j.find("dataset"); d != j.end()) {
    read(*d, "path", c.dataset.path);
    std::string fmt = "jsonl", unit = "passage";
    read(*d, "format", fmt);
    read(*d, "unit", unit);
    c.dataset.format = corpus::parse_format(fmt);
    c.dataset.unit = corpus::parse_unit(unit);
    read(*d, "name", c.dataset.name);
    read(*d, "hierarchy", c.dataset.hierarchy_path);
    read(*d, "split_sentences", c.dataset.split_sentences);
    read(*d, "test_fraction", c.dataset.test_fraction);
  }
  if (j.contains("pairs")) {
    c.pairs.clear();
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) {
        throw Error(ErrorCode::kInvalidInput, "each pair must be [base, add]");
      }
      c.pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    }
  } else if (j.contains("base_sizes") || j.contains("add_sizes")) {
    std::vector<std::size_t> base = {5, 10}, add = {5, 10, 20};
    read(j, "base_sizes", base);
    read(j, "add_sizes", add);
    c.pairs = default_pairs(base, add);
  }
  std::vector<std::string> names;
  if (j.contains("strategies")) {
    read(j, "strategies", names);
    c.strategies.clear();
    for (const auto& n : names) c.strategies.push_back(seedselect::parse_strategy(n));
  }
  if (j.contains("regimes")) {
    names.clear();
    read(j, "regimes", names);
    c.regimes.clear();
    for (const auto& n : names) c.regimes.push_back(genkit::parse_regime(n));
  }
  if (j.contains("baselines")) {
    names.clear();
    read(j, "baselines", names);
    c.baselines.clear();
    for (const auto& n : names) c.baselines.push_back(baselines::parse_method(n));
  }
  read(j, "upperbound", c.upperbound);
  read(j, "iterations", c.iterations);
  read(j, "alpha", c.alpha);
  read(j, "rng_seed", c.rng_seed);
  read(j, "redraw_base", c.redraw_base);
  read(j, "threads", c.threads);
  if (auto g = j.find("generator"); g != j.end()) {
    read(*g, "order", c.generator.order);
    read(*g, "smoothing_alpha", c.generator.smoothing_alpha);
    read(*g, "top_p", c.generator.top_p);
    read(*g, "max_tokens", c.generator.max_tokens);
    read(*g, "temperature", c.generator.temperature);
  }
  if (auto b = j.find("backend"); b != j.end()) {
    std::string kind = "built_in";
    read(*b, "kind", kind);
    if (kind == "external") {
      c.backend = backend_from(*b);
    } else if (kind != "built_in") {
      throw Error(ErrorCode::kInvalidInput, "backend.kind must be built_in or external");
    }
  }
  if (auto a = j.find("augment"); a != j.end()) {
    read(*a, "replace_rate", c.augment.replace_rate);
    read(*a, "neighbor_k", c.augment.neighbor_k);
    if (auto s = a->find("service"); s != a->end()) c.augment_service = backend_from(*s);
  }
  if (auto e = j.find("embedding"); e != j.end()) {
    read(*e, "dim", c.embedding.dim);
    read(*e, "window", c.embedding.window);
    read(*e, "negatives", c.embedding.negatives);
    read(*e, "epochs", c.embedding.epochs);
    read(*e, "lr", c.embedding.lr);
    read(*e, "bucket_count", c.embedding.bucket_count);
    read(*e, "minn", c.embedding.minn);
    read(*e, "maxn", c.embedding.maxn);
    read(*e, "min_count", c.embedding.min_count);
  }
  if (auto k = j.find("classifier"); k != j.end()) {
    read(*k, "word_ngrams", c.classifier.word_ngrams);
    read(*k, "epochs", c.classifier.epochs);
    read(*k, "lr", c.classifier.lr);
    read(*k, "freeze_embeddings", c.classifier.freeze_embeddings);
  }
  read(j, "verdicts", c.verdicts_path);
  read(j, "generic_corpus", c.generic_corpus_path);
  return c;
}

ExperimentConfig parse_config(std::string_view toml_text, const std::string& base_dir) {
  toml::table table;
  try {
    table = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "experiment config line " << e.source().begin.line << ": " << e.description();
    throw Error(ErrorCode::kInvalidInput, msg.str());
  }
  ExperimentConfig c = ExperimentConfig::from_json(to_json_value(table));
  c.dataset.path = resolve(base_dir, c.dataset.path);
  c.dataset.hierarchy_path = resolve(base_dir, c.dataset.hierarchy_path);
  c.verdicts_path = resolve(base_dir, c.verdicts_path);
  c.generic_corpus_path = resolve(base_dir, c.generic_corpus_path);
  if (c.backend) c.backend->cache_dir = resolve(base_dir, c.backend->cache_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open experiment config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace augwork::lab
