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

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "augwork/baselines.h"
#include "augwork/corpus.h"
#include "augwork/data_paths.h"
#include "augwork/error.h"
#include "augwork/genkit.h"
#include "augwork/lab.h"
#include "augwork/model_io.h"
#include "augwork/nounlex.h"
#include "augwork/review.h"
#include "augwork/review_server.h"
#include "augwork/seedselect.h"
#include "augwork/stats.h"
#include "augwork/synth.h"
#include "augwork/text.h"
#include "augwork/textmodel.h"

namespace {

using namespace augwork;
namespace fs = std::filesystem;

struct DataArgs {
  std::string input;
  std::string format = "jsonl";
  std::string hierarchy;
  std::string unit = "passage";
  std::string name;

  void add(CLI::App* app, bool required = true, bool with_unit = true) {
    auto* opt = app->add_option("-i,--input", input, "Dataset file (JSONL or CSV)");
    if (required) opt->required();
    app->add_option("--format", format, "jsonl or csv")->capture_default_str();
    app->add_option("--hierarchy", hierarchy, "JSON class -> [subclass] map");
    if (with_unit) app->add_option("--unit", unit, "passage or sentence")->capture_default_str();
    app->add_option("--name", name, "Dataset name (defaults to the file stem)");
  }

  corpus::LabeledDataset load() const {
    lab::DatasetRef ref;
    ref.path = input;
    ref.format = corpus::parse_format(format);
    ref.unit = corpus::parse_unit(unit);
    ref.hierarchy_path = hierarchy;
    ref.name = name;
    return lab::load_experiment_dataset(ref);
  }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when it is empty or "-".
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
}

std::string dataset_jsonl(const std::vector<corpus::Instance>& instances) {
  std::string out;
  for (const auto& i : instances) out += corpus::to_json_line(i) + "\n";
  return out;
}

std::vector<std::string> read_texts(const std::string& path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty()) continue;
    if (t.front() == '{') {
      try {
        auto j = nlohmann::json::parse(t);
        if (j.contains("text")) {
          out.push_back(j.at("text").get<std::string>());
          continue;
        }
      } catch (const nlohmann::json::exception&) {
      }
    }
    out.emplace_back(t);
  }
  return out;
}

genkit::ExternalBackendConfig endpoint_config(const std::string& endpoint,
                                              const std::string& token_env,
                                              const std::string& cache_dir) {
  genkit::ExternalBackendConfig c;
  c.endpoint = endpoint;
  c.auth_token_env_var = token_env;
  c.cache_dir = cache_dir;
  return c;
}

review::ReviewServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augwork: few-shot text classification data-augmentation workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "augwork 0.1.0");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a dataset to JSONL");
  DataArgs ingest_data;
  ingest_data.add(ingest);
  std::string ingest_out;
  bool multilabel = false;
  ingest->add_option("-o,--out", ingest_out, "Output JSONL (default stdout)");
  ingest->add_flag("--multilabel", multilabel,
                   "Input records carry a 'labels' array; keep single-label ones");
  ingest->callback([&] {
    corpus::LabeledDataset ds;
    if (multilabel) {
      std::ifstream in(ingest_data.input);
      if (!in) throw Error(ErrorCode::kIo, "cannot open " + ingest_data.input);
      auto result = corpus::to_multiclass(corpus::read_multilabel_jsonl(in),
                                          ingest_data.name.empty() ? "dataset" : ingest_data.name);
      std::cerr << "dropped " << result.dropped << " multi-label records\n";
      ds = std::move(result.dataset);
    } else {
      ds = ingest_data.load();
    }
    std::ostringstream out;
    corpus::write_jsonl(out, ds);
    write_output(ingest_out, out.str());
    std::cerr << ds.instances.size() << " instances, " << ds.hierarchy.classes().size()
              << " classes\n";
  });

  // split
  auto* split = app.add_subcommand("split", "Split passages into sentence instances");
  DataArgs split_data;
  split_data.add(split, true, false);
  std::string split_out, abbrev_path, split_unit = "sentence";
  split->add_option("--unit", split_unit, "Target unit: sentence or passage")->capture_default_str();
  split->add_option("-o,--out", split_out, "Output JSONL (default stdout)");
  split->add_option("--abbreviations", abbrev_path, "Abbreviation stop-list, one per line");
  split->callback([&] {
    const auto abbrevs =
        abbrev_path.empty() ? corpus::default_abbreviations() : corpus::load_abbreviations(abbrev_path);
    const auto data = split_data.load();
    std::ostringstream out;
    if (corpus::parse_unit(split_unit) == corpus::Unit::kPassage) {
      corpus::write_jsonl(out, data);
    } else {
      corpus::write_jsonl(out, corpus::split_sentences(data, abbrevs));
    }
    write_output(split_out, out.str());
  });

  // sample
  auto* sample = app.add_subcommand("sample", "Draw k base instances per class");
  DataArgs sample_data;
  sample_data.add(sample);
  std::size_t sample_k = 5;
  std::uint64_t sample_seed = 42;
  std::string sample_out;
  sample->add_option("-k,--k", sample_k, "Instances per class")->capture_default_str();
  sample->add_option("--seed", sample_seed)->capture_default_str();
  sample->add_option("-o,--out", sample_out, "Output JSONL (default stdout)");
  sample->callback([&] {
    auto split = corpus::sample_base(sample_data.load(), sample_k, sample_seed);
    write_output(sample_out, dataset_jsonl(split.base_instances()));
  });

  // nouns
  auto* nouns = app.add_subcommand("nouns", "Count single and compound nouns");
  std::string nouns_text, nouns_input, nouns_lexicon, nouns_suffixes;
  nouns->add_option("--text", nouns_text, "Text to analyse");
  nouns->add_option("-i,--input,input", nouns_input, "JSONL dataset; one result per instance");
  nouns->add_option("--lexicon", nouns_lexicon, "TSV token<TAB>tag (default: bundled)");
  nouns->add_option("--suffix-rules", nouns_suffixes, "TSV suffix<TAB>tag (default: bundled)");
  nouns->callback([&] {
    std::optional<nounlex::PosLexicon> custom;
    if (!nouns_lexicon.empty() || !nouns_suffixes.empty()) {
      custom = nounlex::PosLexicon::load(
          nouns_lexicon.empty() ? data_file("lexicon.tsv").string() : nouns_lexicon,
          nouns_suffixes.empty() ? data_file("suffix_rules.tsv").string() : nouns_suffixes);
    }
    const auto& lex = custom ? *custom : nounlex::PosLexicon::bundled();
    auto report = [&](const std::string& id, const std::string& t) {
      const auto s = nounlex::count_nouns(t, lex);
      nlohmann::json j = {{"single", s.single_nouns}, {"compound", s.compound_nouns}, {"total", s.total}};
      if (!id.empty()) j["id"] = id;
      std::cout << j.dump() << "\n";
    };
    if (!nouns_text.empty()) report("", nouns_text);
    if (!nouns_input.empty()) {
      corpus::IngestOptions opts;
      for (const auto& inst : corpus::load_dataset(nouns_input, opts).instances) report(inst.id, inst.text);
    }
    if (nouns_text.empty() && nouns_input.empty()) throw Error(ErrorCode::kUsage, "give --text or --input");
  });

  // select
  auto* select = app.add_subcommand("select", "Select seed instances per class");
  DataArgs select_data;
  select_data.add(select);
  std::string strategy = "random", verdicts_path, select_out;
  std::size_t select_n = 5;
  std::uint64_t select_seed = 42;
  select->add_option("--strategy", strategy, "random|nouns|subclass|expert-random|expert-nouns")
      ->capture_default_str();
  select->add_option("-n,--n", select_n, "Seeds per class")->capture_default_str();
  select->add_option("--seed", select_seed)->capture_default_str();
  select->add_option("--verdicts", verdicts_path, "Verdict sheet JSONL (expert strategies)");
  select->add_option("-o,--out", select_out, "Output JSONL (default stdout)");
  select->callback([&] {
    const auto s = seedselect::parse_strategy(strategy);
    std::optional<seedselect::VerdictSheet> sheet;
    if (!verdicts_path.empty()) sheet = seedselect::VerdictSheet::load(verdicts_path);
    const auto set = seedselect::select(s, select_data.load(), select_n, select_seed,
                                        nounlex::PosLexicon::bundled(), sheet ? &*sheet : nullptr);
    for (const auto& [cls, missing] : set.shortfall) {
      std::cerr << "class " << cls << ": " << missing << " short of " << select_n << "\n";
    }
    write_output(select_out, dataset_jsonl(set.instances()));
  });

  // generate
  auto* gen = app.add_subcommand("generate", "Generate synthetic instances per label");
  DataArgs gen_data;
  gen_data.add(gen);
  std::string regime = "per_label", gen_out, gen_endpoint, gen_token_env, gen_cache, generic_path;
  std::vector<std::string> gen_labels;
  std::size_t gen_count = 10, order = 3;
  double smoothing = 0.1;
  genkit::SamplingParams sp;
  sp.rng_seed = 42;
  gen->add_option("--regime", regime, "pretrained|domain|per_label")->capture_default_str();
  gen->add_option("--label", gen_labels, "Labels to generate for (default: all)");
  gen->add_option("--count", gen_count, "Instances per label")->capture_default_str();
  gen->add_option("--order", order, "n-gram order")->capture_default_str();
  gen->add_option("--alpha", smoothing, "Additive smoothing")->capture_default_str();
  gen->add_option("--top-p", sp.top_p)->capture_default_str();
  gen->add_option("--max-tokens", sp.max_tokens)->capture_default_str();
  gen->add_option("--temperature", sp.temperature)->capture_default_str();
  gen->add_option("--seed", sp.rng_seed)->capture_default_str();
  gen->add_option("--generic-corpus", generic_path, "Text lines for the pretrained regime");
  gen->add_option("--endpoint", gen_endpoint, "External generation service URL");
  gen->add_option("--auth-token-env", gen_token_env, "Env var holding a bearer token");
  gen->add_option("--cache-dir", gen_cache, "Response cache directory");
  gen->add_option("-o,--out", gen_out, "Output JSONL (default stdout)");
  gen->callback([&] {
    const auto ds = gen_data.load();
    const auto r = genkit::parse_regime(regime);
    const auto by_class = ds.train_by_class();
    std::map<std::string, std::vector<std::string>> label_texts;
    std::vector<std::string> domain_texts;
    for (const auto& inst : ds.instances) {
      if (inst.role == corpus::Role::kTest) continue;
      domain_texts.push_back(inst.text);
      if (inst.role == corpus::Role::kTrain) label_texts[inst.label].push_back(inst.text);
    }
    genkit::BackendRegistry registry;
    if (!gen_endpoint.empty()) {
      auto generator = std::make_shared<genkit::ExternalGenerator>(
          endpoint_config(gen_endpoint, gen_token_env, gen_cache));
      registry = genkit::BackendRegistry::external(r, generator, label_texts, domain_texts);
    } else {
      std::vector<std::string> generic;
      if (r == genkit::Regime::kPretrained) {
        generic = read_texts(generic_path.empty() ? data_file("generic_corpus.txt").string() : generic_path);
      }
      registry = genkit::BackendRegistry::built_in(r, label_texts, domain_texts, generic, order, smoothing);
    }
    if (gen_labels.empty()) {
      for (const auto& [cls, m] : by_class) gen_labels.push_back(cls);
    }
    std::string out;
    for (const auto& label : gen_labels) {
      auto it = by_class.find(label);
      if (it == by_class.end()) throw Error(ErrorCode::kNotFound, "no train instances for label " + label);
      auto result = genkit::generate(registry, label, gen_count, sp, it->second);
      if (result.shortfall) std::cerr << label << ": shortfall " << result.shortfall << "\n";
      for (const auto& g : result.instances) out += genkit::to_json_line(g) + "\n";
    }
    write_output(gen_out, out);
  });

  // augment
  auto* aug = app.add_subcommand("augment", "Word/sentence replacement baselines");
  DataArgs aug_data;
  aug_data.add(aug);
  std::string method = "synonyms", thesaurus_path, embeddings_path, aug_endpoint, aug_out;
  baselines::AugmenterConfig acfg;
  acfg.rng_seed = 42;
  std::size_t aug_count = 0;
  aug->add_option("--method", method, "synonyms|embeddings|mlm|translate")->capture_default_str();
  aug->add_option("--rate", acfg.replace_rate)->capture_default_str();
  aug->add_option("--seed", acfg.rng_seed)->capture_default_str();
  aug->add_option("--neighbor-k", acfg.neighbor_k)->capture_default_str();
  aug->add_option("--thesaurus", thesaurus_path, "Thesaurus TSV (default: bundled)");
  aug->add_option("--embeddings", embeddings_path, "AWB1 embedding model");
  aug->add_option("--endpoint", aug_endpoint, "Mask-fill / translation service URL");
  aug->add_option("--count", aug_count, "Copies per class (default: one per instance)");
  aug->add_option("-o,--out", aug_out, "Output JSONL (default stdout)");
  aug->callback([&] {
    const auto m = baselines::parse_method(method);
    std::optional<baselines::Thesaurus> thes;
    std::optional<textmodel::EmbeddingModel> emb;
    std::unique_ptr<baselines::EmbeddingReplacer> replacer;
    std::unique_ptr<baselines::ServiceAugmenter> service;
    if (m == baselines::Method::kSynonyms) {
      thes = thesaurus_path.empty() ? baselines::Thesaurus::bundled() : baselines::Thesaurus::load(thesaurus_path);
    } else if (m == baselines::Method::kEmbeddings) {
      if (embeddings_path.empty()) throw Error(ErrorCode::kUsage, "--embeddings is required");
      emb = textmodel::load_embedding(embeddings_path);
      replacer = std::make_unique<baselines::EmbeddingReplacer>(*emb);
    } else {
      if (aug_endpoint.empty()) throw Error(ErrorCode::kUsage, "--endpoint is required");
      service = std::make_unique<baselines::ServiceAugmenter>(endpoint_config(aug_endpoint, "", ""));
    }
    baselines::AugmentContext ctx{thes ? &*thes : nullptr, replacer.get(), service.get()};
    std::string out;
    for (const auto& [cls, members] : aug_data.load().train_by_class()) {
      const auto extra = baselines::augment(members, aug_count ? aug_count : members.size(), m, ctx, acfg);
      out += dataset_jsonl(extra);
    }
    write_output(aug_out, out);
  });

  // embed-train
  auto* embed = app.add_subcommand("embed-train", "Train subword skipgram embeddings");
  std::string embed_input, embed_out;
  textmodel::SkipgramConfig sg;
  embed->add_option("-i,--input", embed_input, "Text lines or JSONL with a text field")->required();
  embed->add_option("-o,--out", embed_out, "AWB1 model path")->required();
  embed->add_option("--dim", sg.dim)->capture_default_str();
  embed->add_option("--epochs", sg.epochs)->capture_default_str();
  embed->add_option("--lr", sg.lr)->capture_default_str();
  embed->add_option("--window", sg.window)->capture_default_str();
  embed->add_option("--negatives", sg.negatives)->capture_default_str();
  embed->add_option("--buckets", sg.bucket_count)->capture_default_str();
  embed->add_option("--minn", sg.minn)->capture_default_str();
  embed->add_option("--maxn", sg.maxn)->capture_default_str();
  embed->add_option("--min-count", sg.min_count)->capture_default_str();
  embed->add_option("--seed", sg.rng_seed)->capture_default_str();
  embed->callback([&] {
    const auto model = textmodel::train_skipgram(textmodel::token_streams(read_texts(embed_input)), sg);
    textmodel::save_embedding(embed_out, model);
    std::cerr << "vocabulary " << model.words().size() << ", dim " << model.dim() << "\n";
  });

  // clf-train
  auto* clf = app.add_subcommand("clf-train", "Train the softmax bag-of-n-grams classifier");
  DataArgs clf_data;
  clf_data.add(clf);
  std::string clf_emb, clf_out;
  textmodel::ClassifierConfig cc;
  std::size_t clf_dim = 100;
  std::uint64_t clf_buckets = 2'000'000;
  clf->add_option("--embeddings", clf_emb, "AWB1 embedding model (default: random init)");
  clf->add_option("-o,--out", clf_out, "AWB1 classifier path")->required();
  clf->add_option("--epochs", cc.epochs)->capture_default_str();
  clf->add_option("--lr", cc.lr)->capture_default_str();
  clf->add_option("--word-ngrams", cc.word_ngrams)->capture_default_str();
  clf->add_option("--seed", cc.rng_seed)->capture_default_str();
  clf->add_flag("--freeze", cc.freeze_embeddings, "Keep input vectors fixed");
  clf->add_option("--dim", clf_dim, "Dimension without --embeddings")->capture_default_str();
  clf->add_option("--buckets", clf_buckets, "Buckets without --embeddings")->capture_default_str();
  clf->callback([&] {
    const auto ds = clf_data.load();
    textmodel::EmbeddingModel emb;
    if (clf_emb.empty()) {
      emb = textmodel::EmbeddingModel({}, clf_dim, clf_buckets);
      emb.input().fill_uniform(1.0f / static_cast<float>(clf_dim), cc.rng_seed);
    } else {
      emb = textmodel::load_embedding(clf_emb);
    }
    std::vector<std::string> classes(ds.hierarchy.classes().begin(), ds.hierarchy.classes().end());
    const auto model = textmodel::train_classifier(ds.with_role(corpus::Role::kTrain), classes,
                                                   std::move(emb), cc);
    textmodel::save_classifier(clf_out, model);
  });

  // clf-eval
  auto* eval = app.add_subcommand("clf-eval", "Evaluate a classifier");
  DataArgs eval_data;
  eval_data.add(eval);
  std::string eval_model;
  std::string eval_role = "test";
  eval->add_option("--model", eval_model, "AWB1 classifier")->required();
  eval->add_option("--role", eval_role, "Instances to score: test, train or all")->capture_default_str();
  eval->callback([&] {
    const auto model = textmodel::load_classifier(eval_model);
    const auto ds = eval_data.load();
    std::vector<std::string> preds, golds;
    for (const auto& inst : ds.instances) {
      if (inst.role == corpus::Role::kDomain) continue;
      if (eval_role != "all" && corpus::to_string(inst.role) != eval_role) continue;
      preds.push_back(textmodel::predict(model, inst.text).label);
      golds.push_back(inst.label);
    }
    const auto s = textmodel::evaluate(preds, golds, model.labels());
    nlohmann::json j = {{"micro_f1", s.micro_f1}, {"macro_f1", s.macro_f1},
                        {"accuracy", s.accuracy}, {"per_class_f1", s.per_class_f1},
                        {"n", golds.size()}};
    std::cout << j.dump(2) << "\n";
  });

  // lab
  auto* labcmd = app.add_subcommand("lab", "Experiment grid, reports and t-tests");
  labcmd->require_subcommand(1);
  auto* lab_run = labcmd->add_subcommand("run", "Run the experiment grid");
  std::string lab_config, lab_out_dir = ".";
  lab_run->add_option("--config", lab_config, "experiment.toml")->required();
  bool lab_redraw = false;
  std::size_t lab_threads = 0;
  lab_run->add_option("--out-dir", lab_out_dir, "Where report.{json,md,csv} go")->capture_default_str();
  lab_run->add_flag("--redraw-base", lab_redraw, "Redraw base instances every iteration");
  lab_run->add_option("--threads", lab_threads, "Override the config's thread count");
  lab_run->callback([&] {
    auto cfg = lab::load_config(lab_config);
    if (lab_redraw) cfg.redraw_base = true;
    if (lab_threads) cfg.threads = lab_threads;
    const auto report = lab::run_experiment(cfg);
    fs::create_directories(lab_out_dir);
    write_output((fs::path(lab_out_dir) / "report.json").string(),
                 lab::emit_report(report, lab::ReportFormat::kJson));
    write_output((fs::path(lab_out_dir) / "report.md").string(),
                 lab::emit_report(report, lab::ReportFormat::kMarkdown));
    write_output((fs::path(lab_out_dir) / "report.csv").string(),
                 lab::emit_report(report, lab::ReportFormat::kCsv));
    std::size_t failures = 0;
    for (const auto* c : report.all_cells()) {
      if (!c->ok()) {
        ++failures;
        std::cerr << "cell " << c->key.id() << " failed: " << *c->failure << "\n";
      }
    }
    std::cerr << report.all_cells().size() << " cells, " << failures << " failed\n";
  });
  auto* lab_report = labcmd->add_subcommand("report", "Render a report.json");
  std::string report_in = "report.json", report_format = "markdown", report_out;
  lab_report->add_option("-i,--input", report_in)->capture_default_str();
  lab_report->add_option("--format", report_format, "markdown|csv|json")->capture_default_str();
  lab_report->add_option("-o,--out", report_out, "Output file (default stdout)");
  lab_report->callback([&] {
    const auto fmt = lab::parse_report_format(report_format);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text(report_in));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, e.what());
    }
    write_output(report_out, lab::emit_report(lab::report_from_json(j), fmt));
  });
  auto* lab_ttest = labcmd->add_subcommand("ttest", "Pooled two-sample t-test of two score columns");
  std::string ta, tb;
  double talpha = 0.05;
  lab_ttest->add_option("--a", ta, "CSV, first column numeric")->required();
  lab_ttest->add_option("--b", tb, "CSV, first column numeric")->required();
  lab_ttest->add_option("--alpha", talpha)->capture_default_str();
  lab_ttest->callback([&] {
    const auto r = stats::t_test(lab::read_sample_column(ta), lab::read_sample_column(tb), talpha);
    std::cout << r.to_json().dump(2) << "\n";
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Run the expert review service");
  std::vector<std::string> serve_datasets;
  std::string serve_dir = "review-sessions", serve_format = "jsonl";
  review::ServerOptions sopts;
  serve->add_option("--dataset", serve_datasets, "name=path (repeatable)")->required();
  serve->add_option("--format", serve_format, "Dataset format")->capture_default_str();
  serve->add_option("--dir", serve_dir, "Session journal directory")->capture_default_str();
  serve->add_option("--host", sopts.host)->capture_default_str();
  serve->add_option("--port", sopts.port)->capture_default_str();
  serve->add_option("--cors-origin", sopts.cors_origin)->capture_default_str();
  serve->callback([&] {
    review::StoreOptions store_opts;
    store_opts.directory = serve_dir;
    review::ReviewStore store(store_opts);
    for (const auto& spec : serve_datasets) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kUsage, "--dataset expects name=path");
      corpus::IngestOptions opts;
      opts.format = corpus::parse_format(serve_format);
      opts.name = spec.substr(0, eq);
      store.add_dataset(opts.name, corpus::load_dataset(spec.substr(eq + 1), opts));
    }
    store.recover();
    review::ReviewServer server(store, sopts);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving on " << sopts.host << ":" << sopts.port << "\n";
    server.serve_forever();
    g_server = nullptr;
  });

  // synth
  auto* syn = app.add_subcommand("synth", "Write a synthetic disjoint-vocabulary dataset");
  synth::SyntheticSpec spec;
  std::string synth_out;
  syn->add_option("--classes", spec.classes)->capture_default_str();
  syn->add_option("--subclasses", spec.subclasses_per_class)->capture_default_str();
  syn->add_option("--words", spec.words_per_class, "Vocabulary per class")->capture_default_str();
  syn->add_option("--train", spec.train_per_class)->capture_default_str();
  syn->add_option("--test", spec.test_per_class)->capture_default_str();
  syn->add_option("--domain", spec.domain_per_class)->capture_default_str();
  syn->add_option("--seed", spec.rng_seed)->capture_default_str();
  syn->add_option("-o,--out", synth_out, "Output JSONL (default stdout)");
  syn->callback([&] {
    std::ostringstream out;
    corpus::write_jsonl(out, synth::make_dataset(spec));
    write_output(synth_out, out.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
