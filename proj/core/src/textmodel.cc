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

#include "augwork/textmodel.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "augwork/error.h"
#include "augwork/nounlex.h"
#include "augwork/rng.h"
#include "augwork/text.h"

namespace augwork::textmodel {

std::uint32_t fnv1a32(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t bucket_count) {
  if (bucket_count == 0) throw Error(ErrorCode::kInvalidInput, "bucket_count must be positive");
  return fnv1a32(ngram) % bucket_count;
}

std::vector<std::string> char_ngrams(std::string_view word, int minn, int maxn) {
  std::vector<std::string> out;
  if (minn <= 0 || maxn < minn) return out;
  std::string bracketed = "<";
  bracketed.append(word);
  bracketed.push_back('>');
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  while (pos < bracketed.size()) {
    starts.push_back(pos);
    text::decode_next(bracketed, pos);
  }
  starts.push_back(bracketed.size());
  const std::size_t chars = starts.size() - 1;
  for (std::size_t i = 0; i < chars; ++i) {
    for (int n = minn; n <= maxn && i + n <= chars; ++n) {
      out.emplace_back(bracketed.substr(starts[i], starts[i + n] - starts[i]));
    }
  }
  return out;
}

std::vector<std::string> normalize_tokens(std::string_view text) {
  std::vector<std::string> tokens = nounlex::tokenize(text);
  for (auto& t : tokens) t = text::lower(t);
  return tokens;
}

void Matrix::fill_uniform(float bound, std::uint64_t seed) {
  Rng rng(seed);
  for (auto& v : data_) v = static_cast<float>((rng.uniform_real() * 2.0 - 1.0) * bound);
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> words, std::size_t dim,
                               std::uint64_t bucket_count, int minn, int maxn)
    : dim_(dim), bucket_count_(bucket_count), minn_(minn), maxn_(maxn), words_(std::move(words)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidInput, "embedding dim must be positive");
  if (bucket_count_ == 0) throw Error(ErrorCode::kInvalidInput, "bucket_count must be positive");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate vocabulary word: " + words_[i]);
    }
  }
  input_ = Matrix(words_.size() + bucket_count_, dim_);
}

std::optional<std::size_t> EmbeddingModel::word_index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> EmbeddingModel::subword_rows(std::string_view word) const {
  std::vector<std::size_t> rows;
  if (auto idx = word_index(word)) rows.push_back(*idx);
  for (const auto& g : char_ngrams(word, minn_, maxn_)) rows.push_back(bucket_row(g));
  return rows;
}

std::vector<float> EmbeddingModel::word_vector(std::string_view word) const {
  std::vector<float> v(dim_, 0.0f);
  auto rows = subword_rows(word);
  if (rows.empty()) return v;
  for (auto r : rows) {
    auto src = input_.row(r);
    for (std::size_t i = 0; i < dim_; ++i) v[i] += src[i];
  }
  const float inv = 1.0f / static_cast<float>(rows.size());
  for (auto& x : v) x *= inv;
  return v;
}

PairLoss skipgram_pair_loss(const std::vector<std::vector<double>>& input_rows,
                            const std::vector<std::vector<double>>& outputs) {
  if (input_rows.empty() || outputs.empty()) {
    throw Error(ErrorCode::kInvalidInput, "pair loss needs input rows and a context row");
  }
  const std::size_t dim = input_rows.front().size();
  std::vector<double> hidden(dim, 0.0);
  for (const auto& r : input_rows) {
    for (std::size_t i = 0; i < dim; ++i) hidden[i] += r[i];
  }
  for (auto& x : hidden) x /= static_cast<double>(input_rows.size());

  PairLoss result;
  std::vector<double> grad_hidden(dim, 0.0);
  result.output_grads.assign(outputs.size(), std::vector<double>(dim, 0.0));
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    result.loss += binary_logistic<double>(hidden, outputs[k], k == 0, grad_hidden,
                                           result.output_grads[k]);
  }
  for (auto& g : grad_hidden) g /= static_cast<double>(input_rows.size());
  result.input_grads.assign(input_rows.size(), grad_hidden);
  return result;
}

nlohmann::json SkipgramConfig::to_json() const {
  return {{"dim", dim},       {"window", window},       {"negatives", negatives},
          {"epochs", epochs}, {"lr", lr},               {"rng_seed", rng_seed},
          {"bucket_count", bucket_count}, {"minn", minn}, {"maxn", maxn},
          {"min_count", min_count}};
}

namespace {

class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::size_t>& counts) {
    cumulative_.reserve(counts.size());
    double acc = 0.0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform_real() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

EmbeddingModel train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipgramConfig& config) {
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& sent : corpus) {
    for (const auto& w : sent) ++freq[w];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [w, c] : freq) {
    if (c >= config.min_count) kept.emplace_back(w, c);
  }
  if (kept.empty()) throw Error(ErrorCode::kInsufficientData, "skipgram corpus has no vocabulary");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> words;
  std::vector<std::size_t> counts;
  for (auto& [w, c] : kept) {
    words.push_back(w);
    counts.push_back(c);
  }

  EmbeddingModel model(words, config.dim, config.bucket_count, config.minn, config.maxn);
  const std::size_t dim = config.dim;
  model.input().fill_uniform(1.0f / static_cast<float>(dim), derive_seed(config.rng_seed, "skipgram:init"));
  Matrix output(words.size(), dim);

  std::vector<std::vector<std::size_t>> subwords(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) subwords[i] = model.subword_rows(words[i]);

  std::vector<std::vector<std::size_t>> streams;
  std::size_t total_tokens = 0;
  for (const auto& sent : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& w : sent) {
      if (auto idx = model.word_index(w)) ids.push_back(*idx);
    }
    total_tokens += ids.size();
    streams.push_back(std::move(ids));
  }

  NegativeSampler sampler(counts);
  Rng rng(derive_seed(config.rng_seed, "skipgram:train"));
  const double total_steps = static_cast<double>(config.epochs * total_tokens);
  std::size_t processed = 0;
  std::uint64_t step = 0;
  std::vector<float> hidden(dim), grad_hidden(dim), grad_out(dim);
  auto& input = model.input();

  const std::size_t epochs = config.window == 0 ? 0 : config.epochs;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& ids : streams) {
      for (std::size_t i = 0; i < ids.size(); ++i, ++processed) {
        const float lr = static_cast<float>(
            config.lr * std::max(0.0, 1.0 - static_cast<double>(processed) / total_steps));
        const auto& rows = subwords[ids[i]];
        const float inv_rows = 1.0f / static_cast<float>(rows.size());
        const std::size_t b = static_cast<std::size_t>(rng.uniform_index(config.window)) + 1;
        const std::size_t lo = i >= b ? i - b : 0;
        const std::size_t hi = std::min(ids.size() - 1, i + b);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == i) continue;
          std::fill(hidden.begin(), hidden.end(), 0.0f);
          for (auto r : rows) {
            auto src = input.row(r);
            for (std::size_t d = 0; d < dim; ++d) hidden[d] += src[d];
          }
          for (auto& x : hidden) x *= inv_rows;
          std::fill(grad_hidden.begin(), grad_hidden.end(), 0.0f);

          const std::size_t target = ids[c];
          double loss = 0.0;
          auto apply = [&](std::size_t out_row, bool positive) {
            auto out = output.row(out_row);
            loss += binary_logistic<float>(hidden, std::span<const float>(out.data(), dim),
                                           positive, grad_hidden, grad_out);
            for (std::size_t d = 0; d < dim; ++d) out[d] -= lr * grad_out[d];
          };
          apply(target, true);
          if (words.size() > 1) {
            for (std::size_t n = 0; n < config.negatives; ++n) {
              std::size_t neg = sampler.draw(rng);
              while (neg == target) neg = sampler.draw(rng);
              apply(neg, false);
            }
          }
          ++step;
          if (!std::isfinite(loss)) {
            throw Error(ErrorCode::kDivergence,
                        "skipgram loss became non-finite at step " + std::to_string(step));
          }
          for (auto r : rows) {
            auto dst = input.row(r);
            for (std::size_t d = 0; d < dim; ++d) dst[d] -= lr * grad_hidden[d] * inv_rows;
          }
        }
      }
    }
  }
  return model;
}

std::vector<std::vector<std::string>> token_streams(const std::vector<std::string>& texts) {
  std::vector<std::vector<std::string>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(normalize_tokens(t));
  return out;
}

nlohmann::json ClassifierConfig::to_json() const {
  return {{"word_ngrams", word_ngrams}, {"epochs", epochs},
          {"lr", lr},                   {"rng_seed", rng_seed},
          {"freeze_embeddings", freeze_embeddings}};
}

ClassifierModel::ClassifierModel(std::shared_ptr<const EmbeddingModel> embedding,
                                 std::vector<std::string> labels, std::size_t word_ngrams)
    : embedding_(std::move(embedding)),
      labels_(std::move(labels)),
      word_ngrams_(std::max<std::size_t>(1, word_ngrams)) {
  if (!embedding_) throw Error(ErrorCode::kInvalidInput, "classifier needs an embedding");
  output_ = Matrix(labels_.size(), embedding_->dim());
}

EmbeddingModel ClassifierModel::embedding() const {
  EmbeddingModel out = *embedding_;
  for (const auto& [row, values] : tuned_) {
    std::copy(values.begin(), values.end(), out.input().row(row).begin());
  }
  return out;
}

std::span<const float> ClassifierModel::input_row(std::size_t row) const {
  auto it = tuned_.find(row);
  if (it != tuned_.end()) return it->second;
  return embedding_->input().row(row);
}

std::span<float> ClassifierModel::mutable_input_row(std::size_t row) {
  auto it = tuned_.find(row);
  if (it == tuned_.end()) {
    auto src = embedding_->input().row(row);
    it = tuned_.emplace(row, std::vector<float>(src.begin(), src.end())).first;
  }
  return it->second;
}

Features ClassifierModel::featurize(std::string_view text) const {
  const auto tokens = normalize_tokens(text);
  std::vector<std::vector<std::size_t>> units;
  for (const auto& t : tokens) {
    auto rows = embedding_->subword_rows(t);
    if (!rows.empty()) units.push_back(std::move(rows));
  }
  for (std::size_t n = 2; n <= word_ngrams_; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t j = 1; j < n; ++j) gram += " " + tokens[i + j];
      units.push_back({embedding_->bucket_row(gram)});
    }
  }
  Features features;
  if (units.empty()) return features;
  const float unit_weight = 1.0f / static_cast<float>(units.size());
  for (const auto& rows : units) {
    const float w = unit_weight / static_cast<float>(rows.size());
    for (auto r : rows) features.emplace_back(r, w);
  }
  return features;
}

std::vector<float> ClassifierModel::document_vector(const Features& features) const {
  const std::size_t d = dim();
  std::vector<float> h(d, 0.0f);
  for (const auto& [row, w] : features) {
    auto src = input_row(row);
    for (std::size_t i = 0; i < d; ++i) h[i] += w * src[i];
  }
  return h;
}

std::vector<double> ClassifierModel::logits(std::string_view text) const {
  const auto h = document_vector(featurize(text));
  std::vector<double> z(labels_.size(), 0.0);
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    auto w = output_.row(k);
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += static_cast<double>(w[i]) * h[i];
    z[k] = s;
  }
  return z;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (auto& x : p) x /= sum;
  return p;
}

ClassifierModel train_classifier(const std::vector<corpus::Instance>& train,
                                 const std::vector<std::string>& classes,
                                 EmbeddingModel embedding, const ClassifierConfig& config) {
  return train_classifier(train, classes,
                          std::make_shared<const EmbeddingModel>(std::move(embedding)), config);
}

ClassifierModel train_classifier(const std::vector<corpus::Instance>& train,
                                 const std::vector<std::string>& classes,
                                 std::shared_ptr<const EmbeddingModel> embedding,
                                 const ClassifierConfig& config) {
  if (classes.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "classifier needs at least two classes");
  }
  std::unordered_map<std::string, std::size_t> class_index;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!class_index.emplace(classes[i], i).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate class: " + classes[i]);
    }
  }
  std::vector<std::size_t> support(classes.size(), 0);
  std::vector<std::size_t> targets;
  targets.reserve(train.size());
  for (const auto& inst : train) {
    auto it = class_index.find(inst.label);
    if (it == class_index.end()) {
      throw Error(ErrorCode::kInvalidInput, "training label not in class list: " + inst.label);
    }
    ++support[it->second];
    targets.push_back(it->second);
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (support[i] == 0) {
      throw Error(ErrorCode::kInvalidInput, "class absent from training data: " + classes[i]);
    }
  }

  ClassifierModel model(std::move(embedding), classes, config.word_ngrams);
  model.metadata()["config"] = config.to_json();
  std::vector<Features> features;
  features.reserve(train.size());
  for (const auto& inst : train) features.push_back(model.featurize(inst.text));

  const std::size_t dim = model.dim();
  const std::size_t n_classes = classes.size();
  auto& output = model.output();
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.rng_seed, "classifier:shuffle"));
  const double total_steps = static_cast<double>(config.epochs * train.size());
  std::uint64_t step = 0;
  std::vector<double> z(n_classes);
  std::vector<float> grad_h(dim);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (auto idx : order) {
      const float lr = static_cast<float>(
          config.lr * std::max(0.0, 1.0 - static_cast<double>(step) / total_steps));
      ++step;
      const auto h = model.document_vector(features[idx]);
      for (std::size_t k = 0; k < n_classes; ++k) {
        auto w = output.row(k);
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) s += static_cast<double>(w[d]) * h[d];
        z[k] = s;
      }
      const auto p = softmax(z);
      const double loss = -std::log(p[targets[idx]]);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDivergence,
                    "classifier loss became non-finite at step " + std::to_string(step));
      }
      std::fill(grad_h.begin(), grad_h.end(), 0.0f);
      for (std::size_t k = 0; k < n_classes; ++k) {
        const float g = static_cast<float>(p[k] - (k == targets[idx] ? 1.0 : 0.0));
        auto w = output.row(k);
        for (std::size_t d = 0; d < dim; ++d) {
          grad_h[d] += g * w[d];
          w[d] -= lr * g * h[d];
        }
      }
      if (config.freeze_embeddings) continue;
      for (const auto& [row, weight] : features[idx]) {
        auto dst = model.mutable_input_row(row);
        for (std::size_t d = 0; d < dim; ++d) dst[d] -= lr * weight * grad_h[d];
      }
    }
  }
  return model;
}

Prediction predict(const ClassifierModel& model, std::string_view text) {
  Prediction out;
  const auto z = model.logits(text);
  out.probabilities = softmax(z);
  std::size_t best = 0;
  for (std::size_t k = 1; k < out.probabilities.size(); ++k) {
    if (out.probabilities[k] > out.probabilities[best]) best = k;
  }
  if (!model.labels().empty()) out.label = model.labels()[best];
  return out;
}

EvalScores evaluate(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& golds,
                    const std::vector<std::string>& classes) {
  if (predictions.size() != golds.size()) {
    throw Error(ErrorCode::kInvalidInput, "prediction and gold counts differ");
  }
  if (golds.empty()) throw Error(ErrorCode::kInvalidInput, "nothing to evaluate");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index.emplace(classes[i], i);
  std::vector<double> tp(classes.size(), 0), fp(classes.size(), 0), fn(classes.size(), 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    auto g = index.find(golds[i]);
    auto p = index.find(predictions[i]);
    if (g == index.end()) throw Error(ErrorCode::kInvalidInput, "unknown gold label: " + golds[i]);
    if (p == index.end()) {
      throw Error(ErrorCode::kInvalidInput, "unknown predicted label: " + predictions[i]);
    }
    if (g->second == p->second) {
      ++tp[g->second];
      ++correct;
    } else {
      ++fp[p->second];
      ++fn[g->second];
    }
  }
  EvalScores s;
  double sum_tp = 0, sum_fp = 0, sum_fn = 0, macro = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const double denom = 2 * tp[k] + fp[k] + fn[k];
    const double f1 = denom > 0 ? 2 * tp[k] / denom : 0.0;
    s.per_class_f1[classes[k]] = f1;
    macro += f1;
    sum_tp += tp[k];
    sum_fp += fp[k];
    sum_fn += fn[k];
  }
  s.macro_f1 = classes.empty() ? 0.0 : macro / static_cast<double>(classes.size());
  const double micro_denom = 2 * sum_tp + sum_fp + sum_fn;
  s.micro_f1 = micro_denom > 0 ? 2 * sum_tp / micro_denom : 0.0;
  s.accuracy = static_cast<double>(correct) / static_cast<double>(golds.size());
  return s;
}

NeighborIndex::NeighborIndex(const EmbeddingModel& embedding) {
  for (const auto& w : embedding.words()) {
    const auto v = embedding.word_vector(w);
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    std::vector<double> unit(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) unit[i] = v[i] / norm;
    index_.emplace(w, words_.size());
    words_.push_back(w);
    unit_vectors_.push_back(std::move(unit));
  }
}

bool NeighborIndex::contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

std::vector<std::pair<std::string, double>> NeighborIndex::nearest(std::string_view word,
                                                                  std::size_t k) const {
  std::vector<std::pair<std::string, double>> out;
  auto it = index_.find(std::string(word));
  if (it == index_.end() || k == 0) return out;
  const auto& q = unit_vectors_[it->second];
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i == it->second) continue;
    double dot = 0.0;
    for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * unit_vectors_[i][d];
    out.emplace_back(words_[i], dot);
  }
  const std::size_t keep = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + keep, out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  out.resize(keep);
  return out;
}

}  // namespace augwork::textmodel
