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

#ifndef AUGWORK_TEXTMODEL_H_
#define AUGWORK_TEXTMODEL_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "augwork/corpus.h"

// fastText-style subword embeddings, the bag-of-n-grams softmax classifier
// and F1 evaluation.
namespace augwork::textmodel {

// FNV-1a 32-bit over the raw bytes.
std::uint32_t fnv1a32(std::string_view bytes);

// Feature bucket of an n-gram string: fnv1a32(ngram) % bucket_count.
std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t bucket_count);

// Character n-grams (by code point) of "<word>" with lengths in
// [minn, maxn], in order of start position then length.
std::vector<std::string> char_ngrams(std::string_view word, int minn, int maxn);

// Tokenize and lowercase; the view every model in this namespace uses.
std::vector<std::string> normalize_tokens(std::string_view text);

// Dense row-major float matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<float> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const float> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  // Uniform in [-bound, bound] from a seeded stream.
  void fill_uniform(float bound, std::uint64_t seed);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// Input table: one row per vocabulary word followed by bucket_count rows
// shared by character n-grams and word n-grams.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::vector<std::string> words, std::size_t dim,
                 std::uint64_t bucket_count, int minn = 3, int maxn = 6);

  std::size_t dim() const { return dim_; }
  std::uint64_t bucket_count() const { return bucket_count_; }
  int minn() const { return minn_; }
  int maxn() const { return maxn_; }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<std::size_t> word_index(std::string_view word) const;

  // The word's own row (if in vocabulary) followed by its char n-gram rows.
  std::vector<std::size_t> subword_rows(std::string_view word) const;
  std::size_t bucket_row(std::string_view ngram) const {
    return words_.size() + hash_ngram(ngram, bucket_count_);
  }
  // Mean of the subword rows; zero vector when the word has none.
  std::vector<float> word_vector(std::string_view word) const;

  Matrix& input() { return input_; }
  const Matrix& input() const { return input_; }

  bool operator==(const EmbeddingModel& o) const {
    return dim_ == o.dim_ && bucket_count_ == o.bucket_count_ && minn_ == o.minn_ &&
           maxn_ == o.maxn_ && words_ == o.words_ && input_ == o.input_;
  }

 private:
  std::size_t dim_ = 0;
  std::uint64_t bucket_count_ = 0;
  int minn_ = 3;
  int maxn_ = 6;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix input_;
};

// Logistic loss of one (hidden, output) pair: -log sigmoid(+/- out.hidden).
// Adds d/d(hidden) into grad_hidden and writes d/d(out) into grad_out.
template <typename T>
T binary_logistic(std::span<const T> hidden, std::span<const T> out, bool positive,
                  std::span<T> grad_hidden, std::span<T> grad_out) {
  T score = 0;
  for (std::size_t i = 0; i < hidden.size(); ++i) score += hidden[i] * out[i];
  const T sig = T(1) / (T(1) + std::exp(-score));
  const T coeff = sig - (positive ? T(1) : T(0));
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    grad_hidden[i] += coeff * out[i];
    grad_out[i] = coeff * hidden[i];
  }
  // log1p(exp(-z)) written to stay finite for large |z|.
  const T z = positive ? score : -score;
  return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

struct PairLoss {
  double loss = 0.0;
  std::vector<std::vector<double>> input_grads;   // one per input row
  std::vector<std::vector<double>> output_grads;  // [0] context, then negatives
};

// Skipgram negative-sampling loss for one center/context pair, with the
// center vector the mean of `input_rows`:
//   -log s(u_c . v) - sum_n log s(-u_n . v)
// outputs[0] is u_c; the rest are negatives.
PairLoss skipgram_pair_loss(const std::vector<std::vector<double>>& input_rows,
                            const std::vector<std::vector<double>>& outputs);

struct SkipgramConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.1;
  std::uint64_t rng_seed = 0;
  std::uint64_t bucket_count = 2'000'000;
  int minn = 3;
  int maxn = 6;
  std::size_t min_count = 1;

  nlohmann::json to_json() const;
};

// Single-threaded SGD with linearly decaying learning rate. For each
// position the effective window is drawn uniformly from [1, window];
// negatives come from the unigram^0.75 distribution. Throws
// Error(kDivergence) naming the step if the loss becomes non-finite.
EmbeddingModel train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipgramConfig& config);

// Convenience: normalize_tokens over each text.
std::vector<std::vector<std::string>> token_streams(const std::vector<std::string>& texts);

struct ClassifierConfig {
  std::size_t word_ngrams = 2;
  std::size_t epochs = 25;
  double lr = 0.1;
  std::uint64_t rng_seed = 0;
  bool freeze_embeddings = false;

  nlohmann::json to_json() const;
};

// A document as weighted input rows: its vector is sum(weight * row).
using Features = std::vector<std::pair<std::size_t, float>>;

// The input table is shared with the embedding it was initialized from;
// rows updated during fine-tuning are copied on first write.
class ClassifierModel {
 public:
  ClassifierModel() = default;
  ClassifierModel(std::shared_ptr<const EmbeddingModel> embedding,
                  std::vector<std::string> labels, std::size_t word_ngrams);

  const EmbeddingModel& base_embedding() const { return *embedding_; }
  // Copy of the base embedding with the tuned rows applied.
  EmbeddingModel embedding() const;
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t word_ngrams() const { return word_ngrams_; }
  std::size_t dim() const { return embedding_ ? embedding_->dim() : 0; }
  Matrix& output() { return output_; }
  const Matrix& output() const { return output_; }
  nlohmann::json& metadata() { return metadata_; }
  const nlohmann::json& metadata() const { return metadata_; }

  std::span<const float> input_row(std::size_t row) const;
  std::span<float> mutable_input_row(std::size_t row);
  std::size_t tuned_row_count() const { return tuned_.size(); }

  // Mean over word vectors (each the mean of its subword rows) and hashed
  // word n-gram rows for n in [2, word_ngrams].
  Features featurize(std::string_view text) const;
  std::vector<float> document_vector(const Features& features) const;
  std::vector<double> logits(std::string_view text) const;

 private:
  std::shared_ptr<const EmbeddingModel> embedding_;
  std::unordered_map<std::size_t, std::vector<float>> tuned_;
  std::vector<std::string> labels_;
  std::size_t word_ngrams_ = 2;
  Matrix output_;  // labels x dim
  nlohmann::json metadata_ = nlohmann::json::object();
};

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

// Softmax cross-entropy by SGD over instances shuffled each epoch. The
// embedding initializes the input table; output weights start at zero.
// Throws Error(kInvalidInput) when fewer than two classes are given or a
// class has no training instance.
ClassifierModel train_classifier(const std::vector<corpus::Instance>& train,
                                 const std::vector<std::string>& classes,
                                 std::shared_ptr<const EmbeddingModel> embedding,
                                 const ClassifierConfig& config);
ClassifierModel train_classifier(const std::vector<corpus::Instance>& train,
                                 const std::vector<std::string>& classes,
                                 EmbeddingModel embedding,
                                 const ClassifierConfig& config);

struct Prediction {
  std::string label;
  std::vector<double> probabilities;  // aligned with model.labels()
};

// Argmax with ties going to the earlier label.
Prediction predict(const ClassifierModel& model, std::string_view text);

struct EvalScores {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::map<std::string, double> per_class_f1;
};

// Throws Error(kInvalidInput) on length mismatch, empty input, or a label
// outside `classes`. Classes with no support contribute F1 = 0 to macro.
EvalScores evaluate(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& golds,
                    const std::vector<std::string>& classes);

// Brute-force cosine nearest neighbours over the vocabulary.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingModel& embedding);

  bool contains(std::string_view word) const;
  // Up to k (word, cosine) pairs, most similar first, excluding `word`.
  std::vector<std::pair<std::string, double>> nearest(std::string_view word,
                                                      std::size_t k) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> unit_vectors_;
};

}  // namespace augwork::textmodel

#endif  // AUGWORK_TEXTMODEL_H_
