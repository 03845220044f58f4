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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "augwork/genkit.h"
#include "augwork/nounlex.h"
#include "augwork/stats.h"
#include "augwork/synth.h"
#include "augwork/textmodel.h"

namespace {

using namespace augwork;

corpus::LabeledDataset bench_dataset() {
  synth::SyntheticSpec spec;
  spec.classes = 5;
  spec.rng_seed = 1;
  return synth::make_dataset(spec);
}

std::vector<corpus::Instance> train_of(const corpus::LabeledDataset& ds) {
  std::vector<corpus::Instance> out;
  for (const auto& i : ds.instances) {
    if (i.role == corpus::Role::kTrain) out.push_back(i);
  }
  return out;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text =
      "Mr. O'Neil's well-known report (filed 3 May) said the social worker hadn't visited; "
      "the family's GP referred them to CAMHS in 2019.";
  std::size_t tokens = 0;
  for (auto _ : state) {
    auto t = nounlex::tokenize(text);
    tokens += t.size();
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(static_cast<int64_t>(tokens));
}
BENCHMARK(BM_Tokenize);

void BM_CountNouns(benchmark::State& state) {
  const auto& lex = nounlex::PosLexicon::bundled();
  const std::string text = "The police report described a school visit and a family support plan.";
  for (auto _ : state) benchmark::DoNotOptimize(nounlex::count_nouns(text, lex));
}
BENCHMARK(BM_CountNouns);

void BM_HashNgram(benchmark::State& state) {
  const auto grams = textmodel::char_ngrams("safeguarding", 3, 6);
  for (auto _ : state) {
    for (const auto& g : grams) benchmark::DoNotOptimize(textmodel::hash_ngram(g, 2'000'000));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grams.size()));
}
BENCHMARK(BM_HashNgram);

void BM_GeneratePerLabel(benchmark::State& state) {
  const auto ds = bench_dataset();
  const auto by_class = ds.train_by_class();
  std::map<std::string, std::vector<std::string>> texts;
  for (const auto& [cls, members] : by_class) {
    for (const auto& m : members) texts[cls].push_back(m.text);
  }
  const auto reg = genkit::BackendRegistry::built_in(genkit::Regime::kPerLabel, texts, {}, {},
                                                     static_cast<std::size_t>(state.range(0)), 0.1);
  genkit::SamplingParams params;
  for (auto _ : state) {
    ++params.rng_seed;
    benchmark::DoNotOptimize(genkit::generate(reg, "c0", 20, params, by_class.at("c0")));
  }
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_GeneratePerLabel)->Arg(2)->Arg(3)->Arg(4);

void BM_TrainSkipgram(benchmark::State& state) {
  const auto ds = bench_dataset();
  std::vector<std::string> texts;
  for (const auto& i : ds.instances) texts.push_back(i.text);
  const auto streams = textmodel::token_streams(texts);
  textmodel::SkipgramConfig cfg;
  cfg.dim = 50;
  cfg.epochs = 1;
  cfg.bucket_count = 100'000;
  for (auto _ : state) benchmark::DoNotOptimize(textmodel::train_skipgram(streams, cfg));
}
BENCHMARK(BM_TrainSkipgram)->Unit(benchmark::kMillisecond);

void BM_TrainClassifier(benchmark::State& state) {
  const auto ds = bench_dataset();
  const auto train = train_of(ds);
  const std::vector<std::string> classes(ds.hierarchy.classes().begin(), ds.hierarchy.classes().end());
  auto emb = std::make_shared<textmodel::EmbeddingModel>(std::vector<std::string>{}, 100, 200'000);
  emb->input().fill_uniform(0.01f, 1);
  const std::shared_ptr<const textmodel::EmbeddingModel> base = emb;
  textmodel::ClassifierConfig cfg;
  cfg.epochs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(textmodel::train_classifier(train, classes, base, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(train.size() * cfg.epochs));
}
BENCHMARK(BM_TrainClassifier)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_TTest(benchmark::State& state) {
  std::vector<double> a(12), b(12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = 0.3 + 0.01 * static_cast<double>(i % 5);
    b[i] = 0.4 + 0.013 * static_cast<double>(i % 7);
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::t_test(a, b));
}
BENCHMARK(BM_TTest);

}  // namespace

BENCHMARK_MAIN();
