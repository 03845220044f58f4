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

#ifndef AUGWORK_LAB_H_
#define AUGWORK_LAB_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "augwork/baselines.h"
#include "augwork/corpus.h"
#include "augwork/genkit.h"
#include "augwork/nounlex.h"
#include "augwork/seedselect.h"
#include "augwork/service_client.h"
#include "augwork/stats.h"
#include "augwork/textmodel.h"

// Experiment grid: seed selection x generation regime x (base, add) split,
// plus the None, word/sentence replacement and upperbound rows.
namespace augwork::lab {

struct DatasetRef {
  std::string path;
  corpus::Format format = corpus::Format::kJsonl;
  std::string name;  // defaults to the file stem
  corpus::Unit unit = corpus::Unit::kPassage;
  std::string hierarchy_path;
  bool split_sentences = false;
  double test_fraction = 0.3;  // used only when the data has no test split
};

struct GeneratorSettings {
  std::size_t order = 3;
  double smoothing_alpha = 0.1;
  double top_p = 0.9;
  std::size_t max_tokens = 40;
  double temperature = 1.0;
};

struct ExperimentConfig {
  DatasetRef dataset;
  std::vector<std::pair<std::size_t, std::size_t>> pairs = {{5, 5}, {5, 10}, {10, 10}, {10, 20}};
  std::vector<seedselect::Strategy> strategies = {seedselect::Strategy::kRandom,
                                                  seedselect::Strategy::kMaxNouns,
                                                  seedselect::Strategy::kSubclass};
  std::vector<genkit::Regime> regimes = {genkit::Regime::kPretrained, genkit::Regime::kDomain,
                                         genkit::Regime::kPerLabel};
  std::vector<baselines::Method> baselines = {baselines::Method::kSynonyms,
                                              baselines::Method::kEmbeddings};
  bool upperbound = true;
  std::size_t iterations = 3;
  double alpha = 0.05;
  std::uint64_t rng_seed = 42;
  bool redraw_base = false;
  std::size_t threads = 1;

  GeneratorSettings generator;
  std::optional<genkit::ExternalBackendConfig> backend;  // unset: built-in
  std::optional<genkit::ExternalBackendConfig> augment_service;
  baselines::AugmenterConfig augment;
  textmodel::SkipgramConfig embedding;
  textmodel::ClassifierConfig classifier;
  std::string verdicts_path;        // required by expert strategies
  std::string generic_corpus_path;  // empty: bundled generic corpus

  ExperimentConfig();
  // Throws Error(kInvalidInput) on a violated invariant.
  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Pairs (b, a) with b from base_sizes and a from add_sizes, b <= a <= 2b.
std::vector<std::pair<std::size_t, std::size_t>> default_pairs(
    const std::vector<std::size_t>& base_sizes, const std::vector<std::size_t>& add_sizes);

// TOML mirroring ExperimentConfig; relative paths resolve against the
// config file's directory.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::string_view toml, const std::string& base_dir = ".");

enum class RowKind { kGenerated, kNone, kWordReplacement, kSentenceReplacement, kUpperbound };
std::string_view to_string(RowKind k);
RowKind parse_row_kind(std::string_view s);

struct CellKey {
  std::string dataset;
  RowKind kind = RowKind::kGenerated;
  std::string tuning;  // regime for generated rows, "-" otherwise
  std::string method;  // strategy or augmentation method, "-" for None
  std::size_t base = 0;
  std::size_t add = 0;

  std::string row_id() const;  // dataset/kind/tuning/method
  std::string id() const;      // row_id/base+add
  bool operator==(const CellKey&) const = default;
};

struct IterationScore {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_class_f1;
  std::size_t train_size = 0;
  std::size_t shortfall = 0;
  bool operator==(const IterationScore&) const = default;
};

struct CellResult {
  CellKey key;
  std::vector<IterationScore> per_iteration;
  double mean_micro = 0.0;
  double mean_macro = 0.0;
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
  std::vector<double> micro_scores() const;
  std::vector<double> macro_scores() const;
};

struct TTestRecord {
  std::string dataset;
  std::string metric;  // micro or macro
  std::string best_row;
  std::string none_row;
  stats::TTestResult result;
  std::size_t n_best = 0;
  std::size_t n_none = 0;
};

struct ExperimentReport {
  std::vector<CellResult> cells;      // generated rows
  std::vector<CellResult> baselines;  // None, WR and SR rows
  std::vector<CellResult> upperbound;
  std::vector<TTestRecord> ttests;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json provenance = nlohmann::json::object();

  std::vector<const CellResult*> all_cells() const;
};

// Optional inputs; anything left unset is built from the config and the
// bundled data files.
struct Resources {
  const nounlex::PosLexicon* lexicon = nullptr;
  const baselines::Thesaurus* thesaurus = nullptr;
  const seedselect::VerdictSheet* verdicts = nullptr;
  const std::vector<std::string>* generic_texts = nullptr;
  std::shared_ptr<const textmodel::EmbeddingModel> embedding;
  // Transports used in place of HTTP for the external backends.
  std::shared_ptr<service::Transport> backend_transport;
  std::shared_ptr<service::Transport> augment_transport;
};

// Sets mean_micro / mean_macro from per_iteration.
void finalize_means(CellResult& cell);

ExperimentReport run_experiment(const ExperimentConfig& cfg, const corpus::LabeledDataset& dataset,
                                const Resources& resources = {});
// Loads cfg.dataset first.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Resources& resources = {});
corpus::LabeledDataset load_experiment_dataset(const DatasetRef& ref);

// For each dataset and metric, pools the per-iteration scores of the best
// per_label generated row (highest mean over its cells) and tests them
// against the pooled None scores. Throws Error(kInsufficientData) when a
// side has fewer than two samples.
std::vector<TTestRecord> compare_best_vs_none(const ExperimentReport& report, double alpha);

enum class ReportFormat { kMarkdown, kCsv, kJson };
ReportFormat parse_report_format(std::string_view s);

std::string emit_report(const ExperimentReport& report, ReportFormat format);
nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
// Rebuilds cells (keys, means, failures) from the csv emitted above.
std::vector<CellResult> cells_from_csv(std::string_view csv);
// A single numeric column, one value per row; a non-numeric header row is
// skipped. Used by `lab ttest`.
std::vector<double> read_sample_column(const std::string& path);

// Removes fields that legitimately differ between runs (timestamps,
// durations) for determinism checks.
nlohmann::json strip_volatile(nlohmann::json report_json);

// ".509" formatting used by the markdown table.
std::string format_score(double v);

}  // namespace augwork::lab

#endif  // AUGWORK_LAB_H_
