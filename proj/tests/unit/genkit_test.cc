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
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "augwork/error.h"
#include "augwork/nounlex.h"
#include "augwork/rng.h"
#include "augwork/synth.h"
#include "stub_transport.h"
#include "test_util.h"

namespace augwork::genkit {
namespace {

using augwork::testing::json_response;
using augwork::testing::make_instance;
using augwork::testing::StubTransport;

std::vector<std::string> ctx(std::initializer_list<const char*> toks) {
  return std::vector<std::string>(toks.begin(), toks.end());
}

TEST(NGram, EosCountedForFinalToken) {
  const auto m = train_ngram({"a b a b a"}, 2, 0.0);
  EXPECT_EQ(m.count(ctx({"a"}), "b"), 2u);
  EXPECT_EQ(m.count(ctx({"a"}), kEos), 1u);
  EXPECT_EQ(m.context_total(ctx({"a"})), 3u);
  EXPECT_DOUBLE_EQ(m.probability(ctx({"a"}), "b"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.probability(ctx({"b"}), "a"), 1.0);
  EXPECT_EQ(m.vocab(), (std::set<std::string, std::less<>>{"a", "b", std::string(kBos), std::string(kEos)}));
}

TEST(NGram, AddAlphaSmoothing) {
  const auto m = train_ngram({"a b a b a"}, 2, 1.0);
  // Predictable vocabulary {a, b, EOS}.
  EXPECT_DOUBLE_EQ(m.probability(ctx({"a"}), "b"), (2.0 + 1.0) / (3.0 + 3.0));
  EXPECT_DOUBLE_EQ(m.probability(ctx({"a"}), "a"), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.probability(ctx({"a"}), kEos), 2.0 / 6.0);
}

TEST(NGram, SingleWordCorpus) {
  const auto m = train_ngram({"x"}, 2, 0.0);
  EXPECT_DOUBLE_EQ(m.probability(ctx({"x"}), kEos), 1.0);
  EXPECT_DOUBLE_EQ(m.probability({}, "x"), 1.0);
}

TEST(NGram, Errors) {
  EXPECT_THROW(train_ngram({}, 2, 0.1), Error);
  EXPECT_THROW(train_ngram({"  ", "..."}, 2, 0.1), Error);
  EXPECT_THROW(train_ngram({"a"}, 1, 0.1), Error);
  EXPECT_THROW(train_ngram({"a"}, 2, -1.0), Error);
}

TEST(NGram, DistributionsSumToOne) {
  const auto ds = synth::make_dataset({});
  std::vector<std::string> texts;
  for (const auto& i : ds.instances) texts.push_back(i.text);
  for (std::size_t order : {2u, 3u, 4u}) {
    for (double alpha : {0.0, 0.1, 1.0}) {
      const auto m = train_ngram(texts, order, alpha);
      Rng rng(order);
      for (int q = 0; q < 50; ++q) {
        std::vector<std::string> c;
        const auto toks = nounlex::tokenize(texts[rng.uniform_index(texts.size())]);
        const std::size_t n = rng.uniform_index(std::min<std::size_t>(toks.size(), 4) + 1);
        c.assign(toks.begin(), toks.begin() + n);
        if (q % 5 == 0) c.push_back("never-seen");
        double sum = 0;
        for (const auto& [tok, p] : m.distribution(c)) {
          sum += p;
          if (alpha > 0) EXPECT_GT(p, 0.0);
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
      }
    }
  }
}

TEST(NGram, BacksOffToLongestObservedSuffix) {
  const auto m = train_ngram({"x y z", "q y w"}, 3, 0.0);
  // Context (a, y) never seen: backs off to (y), where z and w are equally likely.
  EXPECT_DOUBLE_EQ(m.probability(ctx({"a", "y"}), "z"), 0.5);
  EXPECT_DOUBLE_EQ(m.probability(ctx({"x", "y"}), "z"), 1.0);
}

TEST(Nucleus, ExampleDistribution) {
  const Distribution d = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
  const auto n = nucleus(d, 0.7);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0].first, "a");
  EXPECT_NEAR(n[0].second, 0.625, 1e-12);
  EXPECT_NEAR(n[1].second, 0.375, 1e-12);
  EXPECT_EQ(nucleus(d, 1.0).size(), 3u);
  EXPECT_EQ(nucleus(d, 0.5).size(), 1u);
}

TEST(Nucleus, TiesBrokenByToken) {
  const Distribution d = {{"z", 0.25}, {"b", 0.25}, {"m", 0.5}};
  const auto n = nucleus(d, 0.6);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0].first, "m");
  EXPECT_EQ(n[1].first, "b");
}

TEST(Nucleus, MinimalPrefixProperty) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    Distribution d;
    double total = 0;
    const std::size_t k = 1 + rng.uniform_index(8);
    for (std::size_t i = 0; i < k; ++i) {
      const double w = 0.01 + rng.uniform_real();
      d.emplace_back("t" + std::to_string(i), w);
      total += w;
    }
    for (auto& [t, p] : d) p /= total;
    const double top_p = 0.05 + 0.95 * rng.uniform_real();
    const auto n = nucleus(d, top_p);
    std::map<std::string, double> orig(d.begin(), d.end());
    double mass = 0;
    for (const auto& [t, p] : n) mass += orig[t];
    EXPECT_GE(mass + 1e-12, top_p);
    EXPECT_LT(mass - orig[n.back().first], top_p);
  }
}

TEST(Nucleus, TemperatureSharpens) {
  const Distribution d = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
  const auto cold = nucleus(d, 1.0, 0.5);
  const auto hot = nucleus(d, 1.0, 2.0);
  EXPECT_GT(cold[0].second, 0.5);
  EXPECT_LT(hot[0].second, 0.5);
}

TEST(Nucleus, Errors) {
  EXPECT_THROW(nucleus({}, 0.9), Error);
  EXPECT_THROW(nucleus({{"a", 0.5}}, 0.9), Error);
  SamplingParams p;
  p.top_p = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p.top_p = 1.0;
  p.max_tokens = 0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Nucleus, MonteCarloFrequency) {
  const Distribution d = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
  SamplingParams p;
  p.top_p = 0.7;
  Rng rng(123);
  std::map<std::string, int> counts;
  for (int i = 0; i < 10000; ++i) ++counts[nucleus_sample(d, p, rng)];
  EXPECT_NEAR(counts["a"] / 10000.0, 0.625, 0.015);
  EXPECT_EQ(counts["c"], 0);
}

std::map<std::string, std::vector<std::string>> label_texts(const corpus::LabeledDataset& ds) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& i : ds.instances) {
    if (i.role == corpus::Role::kTrain) out[i.label].push_back(i.text);
  }
  return out;
}

TEST(Generate, PerLabelVocabularyContainment) {
  synth::SyntheticSpec spec;
  spec.rng_seed = 4;
  const auto ds = synth::make_dataset(spec);
  const auto texts = label_texts(ds);
  const auto reg = BackendRegistry::built_in(Regime::kPerLabel, texts, {}, {}, 3, 0.1);
  SamplingParams p;
  p.rng_seed = 8;
  const auto by_class = ds.train_by_class();
  for (const auto& [label, lt] : texts) {
    std::set<std::string> vocab;
    for (const auto& t : lt) {
      for (auto& tok : nounlex::tokenize(t)) vocab.insert(tok);
    }
    const auto result = generate(reg, label, 20, p, by_class.at(label));
    EXPECT_EQ(result.instances.size(), 20u);
    for (const auto& g : result.instances) {
      EXPECT_EQ(g.instance.label, label);
      EXPECT_EQ(g.backend, label);
      for (const auto& tok : nounlex::tokenize(g.instance.text)) {
        EXPECT_TRUE(vocab.count(tok)) << tok << " not in vocabulary of " << label;
      }
    }
  }
}

TEST(Generate, FivePerLabelAndCountZero) {
  const auto ds = synth::make_dataset({});
  const auto reg = BackendRegistry::built_in(Regime::kPerLabel, label_texts(ds), {}, {}, 3, 0.1);
  const auto by_class = ds.train_by_class();
  std::size_t total = 0;
  for (const auto& [label, seeds] : by_class) {
    const auto r = generate(reg, label, 5, {}, seeds);
    total += r.instances.size();
    for (const auto& g : r.instances) {
      const auto j = nlohmann::json::parse(to_json_line(g));
      EXPECT_TRUE(j.at("synthetic").get<bool>());
      EXPECT_EQ(j.at("label"), label);
    }
    EXPECT_TRUE(generate(reg, label, 0, {}, seeds).instances.empty());
  }
  EXPECT_EQ(total, 25u);
}

TEST(Generate, DeterministicAndSeedSensitive) {
  const auto ds = synth::make_dataset({});
  const auto reg = BackendRegistry::built_in(Regime::kPerLabel, label_texts(ds), {}, {}, 3, 0.1);
  const auto seeds = ds.train_by_class().at("c1");
  SamplingParams p;
  p.rng_seed = 1;
  auto texts = [&](const SamplingParams& params) {
    std::vector<std::string> out;
    for (const auto& g : generate(reg, "c1", 10, params, seeds).instances) out.push_back(g.instance.text);
    return out;
  };
  EXPECT_EQ(texts(p), texts(p));
  SamplingParams q = p;
  q.rng_seed = 2;
  EXPECT_NE(texts(p), texts(q));
}

TEST(Generate, RejectsSeedDuplicatesAndRecordsShortfall) {
  // One training text, alpha 0: the model can only reproduce it.
  BackendRegistry reg(Regime::kPerLabel);
  reg.add({"c", std::make_shared<const NGramModel>(train_ngram({"only this text"}, 2, 0.0))});
  const std::vector<corpus::Instance> seeds = {make_instance("s", "Only  THIS text", "c")};
  const auto r = generate(reg, "c", 3, {}, seeds);
  EXPECT_TRUE(r.instances.empty());
  EXPECT_EQ(r.shortfall, 3u);
  EXPECT_EQ(r.attempts, 30u);
}

TEST(Generate, MaxTokensTruncates) {
  BackendRegistry reg(Regime::kPerLabel);
  reg.add({"c", std::make_shared<const NGramModel>(train_ngram({"a a a a a a a a a a a a"}, 2, 0.0))});
  SamplingParams p;
  p.max_tokens = 4;
  p.top_p = 0.5;
  for (const auto& g : generate(reg, "c", 3, p, {}).instances) {
    EXPECT_LE(nounlex::tokenize(g.instance.text).size(), 4u);
  }
}

TEST(Generate, SharedRegimesArePrimedWithSeedTokens) {
  const std::vector<std::string> generic = {"alpha beta gamma delta", "alpha beta", "gamma delta alpha"};
  const auto reg = BackendRegistry::built_in(Regime::kPretrained, {}, {}, generic, 3, 0.0);
  EXPECT_EQ(reg.backends().size(), 1u);
  EXPECT_EQ(reg.resolve("anything").key, "*");
  const std::vector<corpus::Instance> seeds = {make_instance("s", "gamma delta", "L")};
  SamplingParams p;
  p.top_p = 1.0;
  for (const auto& g : generate(reg, "L", 5, p, seeds).instances) {
    EXPECT_EQ(g.instance.text.rfind("gamma delta", 0), 0u) << g.instance.text;
  }
}

TEST(Registry, PerLabelOneBackendPerClassAndUnknownLabel) {
  const auto ds = synth::make_dataset({});
  const auto reg = BackendRegistry::built_in(Regime::kPerLabel, label_texts(ds), {}, {}, 3, 0.1);
  EXPECT_EQ(reg.backends().size(), 5u);
  EXPECT_THROW(reg.resolve("nope"), Error);
  std::vector<std::string> domain = {"some domain text"};
  const auto dom = BackendRegistry::built_in(Regime::kDomain, {}, domain, {}, 3, 0.1);
  EXPECT_EQ(dom.resolve("c0").key, "*");
}

TEST(Regime, Spellings) {
  EXPECT_EQ(parse_regime("per_label"), Regime::kPerLabel);
  EXPECT_EQ(parse_regime("label"), Regime::kPerLabel);
  EXPECT_EQ(parse_regime("gen"), Regime::kPretrained);
  EXPECT_EQ(parse_regime("domain"), Regime::kDomain);
  EXPECT_THROW(parse_regime("other"), Error);
}

TEST(Request, SerializeParseRoundTripRandomized) {
  Rng rng(31);
  const std::vector<std::string> pieces = {"a", "Ünïcode", "quote\"", "back\\slash", "tab\t", "\n", "€", " "};
  for (int i = 0; i < 200; ++i) {
    GenerationRequest r;
    for (int k = 0; k < 5; ++k) {
      r.prompt += pieces[rng.uniform_index(pieces.size())];
      r.label += pieces[rng.uniform_index(pieces.size())];
    }
    r.model = "m" + std::to_string(rng.uniform_index(100));
    r.max_tokens = 1 + rng.uniform_index(100);
    r.top_p = rng.uniform_real();
    r.temperature = 0.1 + rng.uniform_real();
    r.seed = rng.next();
    const std::string s = serialize(r);
    const auto back = parse_generation_request(s);
    EXPECT_EQ(back, r);
    EXPECT_EQ(serialize(back), s);
  }
  EXPECT_THROW(parse_generation_request("{\"model\": 1}"), Error);
}

ExternalBackendConfig stub_config() {
  ExternalBackendConfig c;
  c.endpoint = "http://stub.invalid:9/v1";
  c.retry.initial_backoff = std::chrono::milliseconds(1);
  return c;
}

TEST(External, GenerateIsCached) {
  auto t = std::make_shared<StubTransport>();
  t->on("/v1/generate", [](const nlohmann::json& req) {
    return json_response({{"text", "echo " + req.at("prompt").get<std::string>()}});
  });
  ExternalGenerator gen(stub_config(), t);
  GenerationRequest r;
  r.prompt = "hi";
  r.label = "x";
  EXPECT_EQ(call_external(gen, r), "echo hi");
  EXPECT_EQ(call_external(gen, r), "echo hi");
  EXPECT_EQ(t->count("/v1/generate"), 1u);
  const auto body = nlohmann::json::parse(t->calls[0].body);
  for (const char* key : {"model", "label", "prompt", "max_tokens", "top_p", "temperature", "seed"}) {
    EXPECT_TRUE(body.contains(key)) << key;
  }
}

TEST(External, ServerErrorThriceIsUnavailable) {
  auto t = std::make_shared<StubTransport>();
  t->on("/v1/generate", [](const nlohmann::json&) { return augwork::service::HttpResponse{500, "{}"}; });
  ExternalGenerator gen(stub_config(), t);
  try {
    gen.generate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(t->count("/v1/generate"), 3u);
}

TEST(External, MissingTextIsProtocolError) {
  auto t = std::make_shared<StubTransport>();
  t->on("/v1/generate", [](const nlohmann::json&) { return json_response({{"txt", "x"}}); });
  ExternalGenerator gen(stub_config(), t);
  try {
    gen.generate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

TEST(External, RegistryFineTunesPerLabel) {
  auto t = std::make_shared<StubTransport>();
  t->on("/v1/finetune", [](const nlohmann::json& req) {
    EXPECT_EQ(req.at("epochs"), 4);
    EXPECT_DOUBLE_EQ(req.at("learning_rate").get<double>(), 5e-5);
    return json_response({{"model", "tuned-" + req.value("label", std::string("all"))}});
  });
  t->on("/v1/generate", [](const nlohmann::json& req) {
    return json_response({{"text", req.at("model").get<std::string>() + " says hello"}});
  });
  auto gen = std::make_shared<ExternalGenerator>(stub_config(), t);
  std::map<std::string, std::vector<std::string>> texts = {{"a", {"x"}}, {"b", {"y"}}};
  const auto reg = BackendRegistry::external(Regime::kPerLabel, gen, texts, {});
  EXPECT_EQ(t->count("/v1/finetune"), 2u);
  const auto r = generate(reg, "b", 1, {}, {make_instance("s", "y", "b")});
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].instance.text, "tuned-b says hello");
  const auto pre = BackendRegistry::external(Regime::kPretrained, gen, texts, {});
  EXPECT_EQ(t->count("/v1/finetune"), 2u);
  EXPECT_EQ(pre.backends().size(), 1u);
}

TEST(External, ConfigValidation) {
  ExternalBackendConfig c = stub_config();
  c.fine_tune_epochs = 0;
  EXPECT_THROW(c.validate(), Error);
  c = stub_config();
  c.endpoint = "ftp://x";
  EXPECT_THROW(c.validate(), Error);
  c = stub_config();
  c.auth_token_env_var = "AUGWORK_TEST_TOKEN_UNSET_VAR";
  EXPECT_FALSE(c.auth_token().has_value());
}

}  // namespace
}  // namespace augwork::genkit
