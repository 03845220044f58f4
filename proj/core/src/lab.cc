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

#include "augwork/lab.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "augwork/data_paths.h"
#include "augwork/error.h"
#include "augwork/rng.h"
#include "augwork/text.h"

#ifndef AUGWORK_GIT_HASH
#define AUGWORK_GIT_HASH "unknown"
#endif

namespace augwork::lab {

std::string_view to_string(RowKind k) {
  switch (k) {
    case RowKind::kGenerated: return "TG";
    case RowKind::kNone: return "None";
    case RowKind::kWordReplacement: return "WR";
    case RowKind::kSentenceReplacement: return "SR";
    case RowKind::kUpperbound: return "upperbound";
  }
  return "?";
}

RowKind parse_row_kind(std::string_view s) {
  if (s == "TG") return RowKind::kGenerated;
  if (s == "None") return RowKind::kNone;
  if (s == "WR") return RowKind::kWordReplacement;
  if (s == "SR") return RowKind::kSentenceReplacement;
  if (s == "upperbound") return RowKind::kUpperbound;
  throw Error(ErrorCode::kMalformedRecord, "unknown row kind: " + std::string(s));
}

std::string CellKey::row_id() const {
  return dataset + "/" + std::string(to_string(kind)) + "/" + tuning + "/" + method;
}

std::string CellKey::id() const {
  return row_id() + "/" + std::to_string(base) + "+" + std::to_string(add);
}

std::vector<double> CellResult::micro_scores() const {
  std::vector<double> out;
  for (const auto& s : per_iteration) out.push_back(s.micro_f1);
  return out;
}

std::vector<double> CellResult::macro_scores() const {
  std::vector<double> out;
  for (const auto& s : per_iteration) out.push_back(s.macro_f1);
  return out;
}

std::vector<const CellResult*> ExperimentReport::all_cells() const {
  std::vector<const CellResult*> out;
  for (const auto* group : {&baselines, &cells, &upperbound}) {
    for (const auto& c : *group) out.push_back(&c);
  }
  return out;
}

void finalize_means(CellResult& cell) {
  if (cell.per_iteration.empty()) {
    cell.mean_micro = cell.mean_macro = 0.0;
    return;
  }
  double micro = 0.0, macro = 0.0;
  for (const auto& s : cell.per_iteration) {
    micro += s.micro_f1;
    macro += s.macro_f1;
  }
  const double n = static_cast<double>(cell.per_iteration.size());
  cell.mean_micro = micro / n;
  cell.mean_macro = macro / n;
}

corpus::LabeledDataset load_experiment_dataset(const DatasetRef& ref) {
  if (ref.path.empty()) throw Error(ErrorCode::kInvalidInput, "experiment config names no dataset");
  corpus::IngestOptions opts;
  opts.format = ref.format;
  opts.unit = ref.unit;
  opts.name = ref.name.empty() ? std::filesystem::path(ref.path).stem().string() : ref.name;
  if (!ref.hierarchy_path.empty()) {
    std::ifstream in(ref.hierarchy_path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open hierarchy: " + ref.hierarchy_path);
    std::stringstream ss;
    ss << in.rdbuf();
    opts.hierarchy = corpus::ClassHierarchy::from_json(ss.str());
  }
  auto data = corpus::load_dataset(ref.path, opts);
  if (ref.split_sentences) data = corpus::split_sentences(data, corpus::default_abbreviations());
  return data;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

using BaseSet = std::map<std::string, std::vector<corpus::Instance>>;

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const corpus::LabeledDataset& dataset, const Resources& res)
      : cfg_(cfg), res_(res) {
    dataset.validate();
    name_ = dataset.name;
    const bool has_test = std::any_of(dataset.instances.begin(), dataset.instances.end(),
                                      [](const auto& i) { return i.role == corpus::Role::kTest; });
    test_seed_ = derive_seed(cfg.rng_seed, "test");
    corpus::LabeledDataset split =
        has_test ? dataset : corpus::hold_out_test(dataset, cfg.dataset.test_fraction, test_seed_);
    pool_.name = split.name;
    pool_.hierarchy = split.hierarchy;
    for (const auto& inst : split.instances) {
      switch (inst.role) {
        case corpus::Role::kTrain:
          pool_.instances.push_back(inst);
          domain_texts_.push_back(inst.text);
          break;
        case corpus::Role::kTest:
          test_.push_back(inst);
          break;
        case corpus::Role::kDomain:
          domain_texts_.push_back(inst.text);
          break;
      }
    }
    if (test_.empty()) throw Error(ErrorCode::kInsufficientData, "experiment has no test instances");
    for (const auto& c : pool_.hierarchy.classes()) classes_.push_back(c);

    if (res.embedding) {
      embedding_ = res.embedding;
    } else {
      auto sg = cfg.embedding;
      sg.rng_seed = derive_seed(cfg.rng_seed, "embedding");
      embedding_ = std::make_shared<const textmodel::EmbeddingModel>(
          textmodel::train_skipgram(textmodel::token_streams(domain_texts_), sg));
    }
    prepare_resources();
  }

  ExperimentReport run() {
    const auto started = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = cfg_.to_json();
    report.provenance["started_at"] = iso_now();

    std::vector<std::function<CellResult()>> baseline_tasks, cell_tasks, upper_tasks;
    for (std::size_t bi = 0; bi < cfg_.pairs.size(); ++bi) {
      const auto [b, a] = cfg_.pairs[bi];
      baseline_tasks.push_back([this, b = b, a = a] { return none_cell(b, a); });
    }
    for (auto m : cfg_.baselines) {
      for (const auto& [b, a] : cfg_.pairs) {
        baseline_tasks.push_back([this, m, b = b, a = a] { return replacement_cell(m, b, a); });
      }
    }
    for (auto r : cfg_.regimes) {
      for (auto s : cfg_.strategies) {
        for (const auto& [b, a] : cfg_.pairs) {
          cell_tasks.push_back([this, r, s, b = b, a = a] { return generated_cell(r, s, b, a); });
        }
      }
    }
    if (cfg_.upperbound) {
      for (const auto& [b, a] : cfg_.pairs) {
        upper_tasks.push_back([this, b = b, a = a] { return upperbound_cell(b, a); });
      }
    }
    report.baselines = execute(baseline_tasks);
    report.cells = execute(cell_tasks);
    report.upperbound = execute(upper_tasks);

    try {
      report.ttests = compare_best_vs_none(report, cfg_.alpha);
    } catch (const Error& e) {
      report.provenance["ttest_error"] = e.what();
    }

    auto& prov = report.provenance;
    prov["git_hash"] = AUGWORK_GIT_HASH;
    prov["finished_at"] = iso_now();
    prov["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - started)
                              .count();
    prov["seeds"] = {{"master", cfg_.rng_seed},
                     {"test_split", test_seed_},
                     {"embedding", derive_seed(cfg_.rng_seed, "embedding")}};
    prov["dataset"] = {{"name", name_},
                       {"classes", classes_},
                       {"train_pool", pool_.instances.size()},
                       {"test", test_.size()},
                       {"domain_texts", domain_texts_.size()}};
    prov["embedding"] = {{"vocab", embedding_->words().size()},
                         {"dim", embedding_->dim()},
                         {"bucket_count", embedding_->bucket_count()}};
    prov["backend"] = cfg_.backend ? "external" : "built_in";
    return report;
  }

 private:
  void prepare_resources() {
    const bool needs_lexicon = std::any_of(cfg_.strategies.begin(), cfg_.strategies.end(), [](auto s) {
      return s == seedselect::Strategy::kMaxNouns || s == seedselect::Strategy::kExpertNouns;
    });
    lexicon_ = res_.lexicon;
    if (!lexicon_ && needs_lexicon) {
      owned_lexicon_ = std::make_unique<nounlex::PosLexicon>(nounlex::PosLexicon::bundled());
      lexicon_ = owned_lexicon_.get();
    }
    if (!lexicon_) {
      owned_lexicon_ = std::make_unique<nounlex::PosLexicon>();
      lexicon_ = owned_lexicon_.get();
    }
    verdicts_ = res_.verdicts;
    if (!verdicts_ && !cfg_.verdicts_path.empty()) {
      owned_verdicts_ = std::make_unique<seedselect::VerdictSheet>(
          seedselect::VerdictSheet::load(cfg_.verdicts_path));
      verdicts_ = owned_verdicts_.get();
    }
    auto uses = [&](baselines::Method m) {
      return std::find(cfg_.baselines.begin(), cfg_.baselines.end(), m) != cfg_.baselines.end();
    };
    thesaurus_ = res_.thesaurus;
    if (!thesaurus_ && uses(baselines::Method::kSynonyms)) {
      owned_thesaurus_ = std::make_unique<baselines::Thesaurus>(baselines::Thesaurus::bundled());
      thesaurus_ = owned_thesaurus_.get();
    }
    if (uses(baselines::Method::kEmbeddings)) {
      replacer_ = std::make_unique<baselines::EmbeddingReplacer>(*embedding_);
    }
    if ((uses(baselines::Method::kMlm) || uses(baselines::Method::kTranslate)) &&
        cfg_.augment_service) {
      service_ = std::make_unique<baselines::ServiceAugmenter>(*cfg_.augment_service,
                                                               res_.augment_transport);
    }
    if (cfg_.backend) {
      generator_ = std::make_shared<genkit::ExternalGenerator>(*cfg_.backend, res_.backend_transport);
    }
    for (auto r : cfg_.regimes) {
      if (r == genkit::Regime::kPerLabel) continue;
      try {
        if (generator_) {
          shared_registries_.emplace(r, genkit::BackendRegistry::external(r, generator_, {}, domain_texts_));
        } else {
          std::vector<std::string> generic;
          if (r == genkit::Regime::kPretrained) {
            generic = res_.generic_texts ? *res_.generic_texts
                      : cfg_.generic_corpus_path.empty()
                          ? read_lines(data_file("generic_corpus.txt"))
                          : read_lines(cfg_.generic_corpus_path);
          }
          shared_registries_.emplace(
              r, genkit::BackendRegistry::built_in(r, {}, domain_texts_, generic,
                                                   cfg_.generator.order,
                                                   cfg_.generator.smoothing_alpha));
        }
      } catch (const Error& e) {
        registry_errors_[r] = e.what();
      }
    }
  }

  std::vector<CellResult> execute(const std::vector<std::function<CellResult()>>& tasks) {
    std::vector<CellResult> out(tasks.size());
    std::size_t threads = cfg_.threads;
    if (generator_ || service_) threads = 1;
    threads = std::max<std::size_t>(1, std::min(threads, tasks.size()));
    if (threads == 1) {
      for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = tasks[i]();
      });
    }
    for (auto& th : pool) th.join();
    return out;
  }

  CellKey key(RowKind kind, std::string tuning, std::string method, std::size_t b,
              std::size_t a) const {
    return {name_, kind, std::move(tuning), std::move(method), b, a};
  }

  std::uint64_t base_seed(seedselect::Strategy s, std::size_t b, std::size_t it) const {
    return derive_seed(cfg_.rng_seed,
                       "base/" + std::string(seedselect::to_string(s)) + "/" + std::to_string(b),
                       cfg_.redraw_base ? it : 0);
  }

  BaseSet base_for(seedselect::Strategy s, std::size_t b, std::size_t it) const {
    if (s == seedselect::Strategy::kRandom) {
      return corpus::sample_base(pool_, b, base_seed(s, b, it)).base;
    }
    return seedselect::select(s, pool_, b, base_seed(s, b, it), *lexicon_, verdicts_).per_class;
  }

  static std::vector<corpus::Instance> flatten(const BaseSet& base) {
    std::vector<corpus::Instance> out;
    for (const auto& [cls, members] : base) out.insert(out.end(), members.begin(), members.end());
    return out;
  }

  std::uint64_t classifier_seed(std::size_t b, std::size_t a, std::size_t it) const {
    return derive_seed(cfg_.rng_seed, "clf/" + std::to_string(b) + "+" + std::to_string(a), it);
  }

  IterationScore score(const std::vector<corpus::Instance>& train, std::uint64_t seed) const {
    auto cc = cfg_.classifier;
    cc.rng_seed = seed;
    const auto model = textmodel::train_classifier(train, classes_, embedding_, cc);
    std::vector<std::string> preds, golds;
    preds.reserve(test_.size());
    for (const auto& inst : test_) {
      preds.push_back(textmodel::predict(model, inst.text).label);
      golds.push_back(inst.label);
    }
    const auto eval = textmodel::evaluate(preds, golds, classes_);
    IterationScore s;
    s.micro_f1 = eval.micro_f1;
    s.macro_f1 = eval.macro_f1;
    s.per_class_f1 = eval.per_class_f1;
    s.train_size = train.size();
    return s;
  }

  template <typename Fn>
  CellResult guarded(CellKey k, Fn&& body) const {
    CellResult cell;
    cell.key = std::move(k);
    try {
      for (std::size_t it = 0; it < cfg_.iterations; ++it) cell.per_iteration.push_back(body(it));
      finalize_means(cell);
    } catch (const std::exception& e) {
      cell.per_iteration.clear();
      cell.failure = e.what();
    }
    return cell;
  }

  CellResult none_cell(std::size_t b, std::size_t a) const {
    return guarded(key(RowKind::kNone, "-", "-", b, a), [&](std::size_t it) {
      return score(flatten(base_for(seedselect::Strategy::kRandom, b, it)), classifier_seed(b, 0, it));
    });
  }

  CellResult upperbound_cell(std::size_t b, std::size_t a) const {
    const auto k = key(RowKind::kUpperbound, "-", "-", b, a);
    return guarded(k, [&](std::size_t it) {
      const auto base = base_for(seedselect::Strategy::kRandom, b, it);
      std::set<std::string> used;
      for (const auto& inst : flatten(base)) used.insert(inst.id);
      Rng rng(derive_seed(cfg_.rng_seed, "upper/" + k.id(), it));
      auto train = flatten(base);
      std::size_t shortfall = 0;
      for (const auto& [cls, members] : pool_.train_by_class()) {
        std::vector<corpus::Instance> rest;
        for (const auto& m : members) {
          if (!used.count(m.id)) rest.push_back(m);
        }
        rng.shuffle(rest);
        const std::size_t take = std::min(a, rest.size());
        shortfall += a - take;
        train.insert(train.end(), rest.begin(), rest.begin() + take);
      }
      auto s = score(train, classifier_seed(b, a, it));
      s.shortfall = shortfall;
      return s;
    });
  }

  CellResult replacement_cell(baselines::Method m, std::size_t b, std::size_t a) const {
    const RowKind kind = m == baselines::Method::kTranslate ? RowKind::kSentenceReplacement
                                                            : RowKind::kWordReplacement;
    const auto k = key(kind, "-", std::string(baselines::to_string(m)), b, a);
    return guarded(k, [&](std::size_t it) {
      const auto base = base_for(seedselect::Strategy::kRandom, b, it);
      baselines::AugmentContext ctx{thesaurus_, replacer_.get(), service_.get()};
      if ((m == baselines::Method::kMlm || m == baselines::Method::kTranslate) && !service_) {
        throw Error(ErrorCode::kInvalidInput, "no augmentation service configured");
      }
      auto acfg = cfg_.augment;
      acfg.rng_seed = derive_seed(cfg_.rng_seed, "aug/" + k.id(), it);
      auto train = flatten(base);
      for (const auto& [cls, members] : base) {
        auto extra = baselines::augment(members, a, m, ctx, acfg);
        train.insert(train.end(), extra.begin(), extra.end());
      }
      return score(train, classifier_seed(b, a, it));
    });
  }

  CellResult generated_cell(genkit::Regime r, seedselect::Strategy s, std::size_t b,
                            std::size_t a) const {
    const auto k = key(RowKind::kGenerated, std::string(genkit::to_string(r)),
                       std::string(seedselect::to_string(s)), b, a);
    return guarded(k, [&](std::size_t it) {
      if (auto err = registry_errors_.find(r); err != registry_errors_.end()) {
        throw Error(ErrorCode::kInvalidInput, err->second);
      }
      const auto base = base_for(s, b, it);
      genkit::BackendRegistry per_label;
      const genkit::BackendRegistry* registry = nullptr;
      if (r == genkit::Regime::kPerLabel) {
        std::map<std::string, std::vector<std::string>> label_texts;
        for (const auto& [cls, members] : base) {
          for (const auto& m : members) label_texts[cls].push_back(m.text);
        }
        per_label = generator_
                        ? genkit::BackendRegistry::external(r, generator_, label_texts, {})
                        : genkit::BackendRegistry::built_in(r, label_texts, {}, {},
                                                            cfg_.generator.order,
                                                            cfg_.generator.smoothing_alpha);
        registry = &per_label;
      } else {
        registry = &shared_registries_.at(r);
      }
      genkit::SamplingParams params;
      params.top_p = cfg_.generator.top_p;
      params.max_tokens = cfg_.generator.max_tokens;
      params.temperature = cfg_.generator.temperature;
      params.rng_seed = derive_seed(cfg_.rng_seed, "gen/" + k.id(), it);
      auto train = flatten(base);
      std::size_t shortfall = 0;
      for (const auto& [cls, members] : base) {
        auto result = genkit::generate(*registry, cls, a, params, members);
        shortfall += result.shortfall;
        for (auto& g : result.instances) train.push_back(std::move(g.instance));
      }
      auto sc = score(train, classifier_seed(b, a, it));
      sc.shortfall = shortfall;
      return sc;
    });
  }

  const ExperimentConfig& cfg_;
  const Resources& res_;
  std::string name_;
  std::uint64_t test_seed_ = 0;
  corpus::LabeledDataset pool_;
  std::vector<corpus::Instance> test_;
  std::vector<std::string> classes_;
  std::vector<std::string> domain_texts_;
  std::shared_ptr<const textmodel::EmbeddingModel> embedding_;
  const nounlex::PosLexicon* lexicon_ = nullptr;
  const seedselect::VerdictSheet* verdicts_ = nullptr;
  const baselines::Thesaurus* thesaurus_ = nullptr;
  std::unique_ptr<nounlex::PosLexicon> owned_lexicon_;
  std::unique_ptr<seedselect::VerdictSheet> owned_verdicts_;
  std::unique_ptr<baselines::Thesaurus> owned_thesaurus_;
  std::unique_ptr<baselines::EmbeddingReplacer> replacer_;
  std::unique_ptr<baselines::ServiceAugmenter> service_;
  std::shared_ptr<genkit::ExternalGenerator> generator_;
  std::map<genkit::Regime, genkit::BackendRegistry> shared_registries_;
  std::map<genkit::Regime, std::string> registry_errors_;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const corpus::LabeledDataset& dataset,
                                const Resources& resources) {
  cfg.validate();
  Runner runner(cfg, dataset, resources);
  return runner.run();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Resources& resources) {
  return run_experiment(cfg, load_experiment_dataset(cfg.dataset), resources);
}

std::vector<TTestRecord> compare_best_vs_none(const ExperimentReport& report, double alpha) {
  std::vector<TTestRecord> out;
  std::set<std::string> datasets;
  for (const auto& c : report.baselines) {
    if (c.key.kind == RowKind::kNone) datasets.insert(c.key.dataset);
  }
  const std::string per_label(genkit::to_string(genkit::Regime::kPerLabel));
  for (const auto& ds : datasets) {
    std::map<std::string, std::vector<const CellResult*>> rows;
    for (const auto& c : report.cells) {
      if (c.key.dataset == ds && c.key.kind == RowKind::kGenerated && c.key.tuning == per_label &&
          c.ok()) {
        rows[c.key.row_id()].push_back(&c);
      }
    }
    if (rows.empty()) continue;
    std::vector<const CellResult*> none;
    for (const auto& c : report.baselines) {
      if (c.key.dataset == ds && c.key.kind == RowKind::kNone && c.ok()) none.push_back(&c);
    }
    for (const std::string metric : {"micro", "macro"}) {
      auto scores = [&](const CellResult& c) {
        return metric == "micro" ? c.micro_scores() : c.macro_scores();
      };
      std::string best_row;
      double best_mean = -1.0;
      for (const auto& [row, cells] : rows) {
        double sum = 0.0;
        for (const auto* c : cells) sum += metric == "micro" ? c->mean_micro : c->mean_macro;
        const double m = sum / static_cast<double>(cells.size());
        if (m > best_mean) {
          best_mean = m;
          best_row = row;
        }
      }
      std::vector<double> a, b;
      for (const auto* c : rows[best_row]) {
        auto s = scores(*c);
        a.insert(a.end(), s.begin(), s.end());
      }
      for (const auto* c : none) {
        auto s = scores(*c);
        b.insert(b.end(), s.begin(), s.end());
      }
      if (a.size() < 2 || b.size() < 2) {
        throw Error(ErrorCode::kInsufficientData,
                    "t-test for " + ds + " needs at least two samples per side");
      }
      TTestRecord rec;
      rec.dataset = ds;
      rec.metric = metric;
      rec.best_row = best_row;
      rec.none_row = none.empty() ? "" : none.front()->key.row_id();
      rec.result = stats::t_test(a, b, alpha);
      rec.n_best = a.size();
      rec.n_none = b.size();
      out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace augwork::lab
