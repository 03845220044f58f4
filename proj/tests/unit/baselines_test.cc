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

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "augwork/error.h"
#include "augwork/nounlex.h"
#include "augwork/text.h"
#include "stub_transport.h"
#include "test_util.h"

namespace augwork::baselines {
namespace {

using augwork::testing::json_response;
using augwork::testing::make_instance;
using augwork::testing::StubTransport;

Thesaurus thesaurus_of(const std::string& tsv) {
  std::istringstream in(tsv);
  return Thesaurus::parse(in);
}

std::vector<std::string> words_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

TEST(Thesaurus, ParseAndValidate) {
  const auto t = thesaurus_of("# comment\nHappy\tglad | felicitous\n\nbig\tlarge\n");
  ASSERT_NE(t.find("happy"), nullptr);
  EXPECT_EQ(*t.find("happy"), (std::vector<std::string>{"glad", "felicitous"}));
  EXPECT_EQ(t.find("dog"), nullptr);
  EXPECT_THROW(thesaurus_of("bad line without tab\n"), Error);
  EXPECT_THROW(thesaurus_of("same\tsame\n"), Error);
  EXPECT_THROW(thesaurus_of("empty\t\n"), Error);
  const auto bundled = Thesaurus::bundled();
  EXPECT_GT(bundled.synonyms.size(), 1000u);
  EXPECT_NE(bundled.find("happy"), nullptr);
}

TEST(Synonyms, Examples) {
  const auto t = thesaurus_of("happy\tglad\n");
  AugmenterConfig cfg;
  cfg.replace_rate = 1.0;
  EXPECT_EQ(synonym_replace("happy dog", t, cfg), "glad dog");
  EXPECT_EQ(synonym_replace("Happy dog!", t, cfg), "Glad dog!");
  cfg.replace_rate = 0.0;
  EXPECT_EQ(synonym_replace("happy dog", t, cfg), "happy dog");
  cfg.replace_rate = 1.5;
  EXPECT_THROW(synonym_replace("happy dog", t, cfg), Error);
}

TEST(Synonyms, MultiwordSynonymsAreHyphenJoined) {
  EXPECT_EQ(hyphen_join(" domestic  dog "), "domestic-dog");
  const auto t = thesaurus_of("dog\tdomestic dog\n");
  AugmenterConfig cfg;
  cfg.replace_rate = 1.0;
  EXPECT_EQ(synonym_replace("a dog barks", t, cfg), "a domestic-dog barks");
}

TEST(Synonyms, ReplacementRateAndWordCount) {
  const auto t = thesaurus_of("red\tcrimson\nblue\tazure|navy\ngreen\tverdant\n");
  const std::vector<std::string> pool = {"red", "blue", "green"};
  Rng rng(1);
  std::string text;
  const int n = 10000;
  for (int i = 0; i < n; ++i) text += (i ? " " : "") + pool[rng.uniform_index(3)];
  AugmenterConfig cfg;
  cfg.replace_rate = 0.3;
  cfg.rng_seed = 8;
  const auto out = synonym_replace(text, t, cfg);
  const auto before = words_of(text), after = words_of(out);
  ASSERT_EQ(before.size(), after.size());
  int changed = 0;
  for (std::size_t i = 0; i < before.size(); ++i) changed += before[i] != after[i];
  EXPECT_NEAR(static_cast<double>(changed) / n, 0.3, 0.015);
}

TEST(Synonyms, TokenCountPreservedOnRandomSentences) {
  const auto t = thesaurus_of("quick\tfast\nlazy\tidle|slothful\nfox\tvixen\njumps\tleaps\n");
  const std::vector<std::string> vocab = {"the", "quick", "lazy", "fox", "jumps", "over", "dog", "Quick", "Fox"};
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    const auto len = 1 + rng.uniform_index(15);
    for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + vocab[rng.uniform_index(vocab.size())];
    s += ".";
    AugmenterConfig cfg;
    cfg.replace_rate = 0.5;
    cfg.rng_seed = trial;
    const auto out = synonym_replace(s, t, cfg);
    EXPECT_EQ(nounlex::tokenize(out).size(), nounlex::tokenize(s).size()) << s << " -> " << out;
    EXPECT_EQ(synonym_replace(s, t, cfg), out);
  }
}

textmodel::EmbeddingModel three_words() {
  textmodel::EmbeddingModel m({"king", "queen", "banana"}, 2, 1, 10, 10);
  auto set = [&](const char* w, float x, float y) {
    const auto r = *m.word_index(w);
    m.input().row(r)[0] = x;
    m.input().row(r)[1] = y;
  };
  set("king", 1, 0.1f);
  set("queen", 1, 0.2f);
  set("banana", -1, 1);
  return m;
}

TEST(Embeddings, NearestNeighborReplacesSelfExcluded) {
  const auto m = three_words();
  EmbeddingReplacer r(m, {});
  AugmenterConfig cfg;
  cfg.replace_rate = 1.0;
  cfg.neighbor_k = 1;
  EXPECT_EQ(r.replace("the King spoke", cfg), "the Queen spoke");
  EXPECT_EQ(r.replace("queen", cfg), "king");
  EXPECT_FALSE(r.eligible("the"));
  EmbeddingReplacer stopped(m, {"king"});
  EXPECT_EQ(stopped.replace("king", cfg), "king");
  cfg.replace_rate = 0;
  EXPECT_EQ(r.replace("king", cfg), "king");
}

genkit::ExternalBackendConfig stub_config() {
  genkit::ExternalBackendConfig cfg;
  cfg.endpoint = "http://stub.invalid:9/svc";
  cfg.retry.initial_backoff = std::chrono::milliseconds(1);
  return cfg;
}

TEST(Mlm, RateZeroSendsNothing) {
  auto t = std::make_shared<StubTransport>();
  ServiceAugmenter svc(stub_config(), t);
  AugmenterConfig cfg;
  cfg.replace_rate = 0.0;
  EXPECT_EQ(mlm_replace("a b c", svc, cfg), "a b c");
  EXPECT_TRUE(t->calls.empty());
}

TEST(Mlm, FillsMaskedPositions) {
  auto t = std::make_shared<StubTransport>();
  t->on("/svc/fill", [](const nlohmann::json& req) {
    const auto r = MaskFillRequest::from_json(req);
    return json_response({{"token", r.mask_index == 1 ? "big red" : words_of(r.text)[r.mask_index]}});
  });
  ServiceAugmenter svc(stub_config(), t);
  AugmenterConfig cfg;
  cfg.replace_rate = 1.0;
  EXPECT_EQ(mlm_replace("Same small dog", svc, cfg), "Same big-red dog");
  EXPECT_EQ(t->count("/svc/fill"), 3u);
  const auto first = MaskFillRequest::from_json(nlohmann::json::parse(t->calls[0].body));
  EXPECT_EQ(first, (MaskFillRequest{"Same small dog", 0}));
}

TEST(Mlm, ServerErrorsExhaustRetries) {
  auto t = std::make_shared<StubTransport>();
  t->on("/svc/fill", [](const nlohmann::json&) { return service::HttpResponse{500, "{}"}; });
  ServiceAugmenter svc(stub_config(), t);
  AugmenterConfig cfg;
  cfg.replace_rate = 1.0;
  try {
    mlm_replace("word", svc, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(t->count("/svc/fill"), 3u);
}

TEST(Translate, RequestRoundTrip) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    TranslateRequest r{"text " + std::to_string(rng.next()), i % 2 ? "en" : "de", "fr"};
    EXPECT_EQ(TranslateRequest::from_json(nlohmann::json::parse(r.to_json().dump())), r);
    MaskFillRequest m{"x y \"z\"", rng.uniform_index(9)};
    EXPECT_EQ(MaskFillRequest::from_json(nlohmann::json::parse(m.to_json().dump())), m);
  }
  EXPECT_THROW(TranslateRequest::from_json({{"text", "x"}}), Error);
}

std::shared_ptr<StubTransport> canned_translator() {
  static const std::map<std::pair<std::string, std::string>, std::string> table = {
      {{"en", "The film was wonderful."}, "Der Film war wunderbar."},
      {{"de", "Der Film war wunderbar."}, "The movie was wonderful."},
  };
  auto t = std::make_shared<StubTransport>();
  t->on("/svc/translate", [](const nlohmann::json& req) {
    const auto r = TranslateRequest::from_json(req);
    auto it = table.find({r.source, r.text});
    return json_response({{"text", it == table.end() ? r.text : it->second}});
  });
  return t;
}

TEST(Translate, BackTranslationThroughPivot) {
  auto t = canned_translator();
  ServiceAugmenter svc(stub_config(), t);
  EXPECT_EQ(back_translate("The film was wonderful.", svc), "The movie was wonderful.");
  ASSERT_EQ(t->calls.size(), 2u);
  const auto there = TranslateRequest::from_json(nlohmann::json::parse(t->calls[0].body));
  EXPECT_EQ(there.target, "de");
  EXPECT_EQ(back_translate("The film was wonderful.", svc), "The movie was wonderful.");
  EXPECT_EQ(t->calls.size(), 2u);
  EXPECT_EQ(back_translate("Unchanged text.", svc), "Unchanged text.");
}

TEST(Translate, EmptyTranslationIsProtocolError) {
  auto t = std::make_shared<StubTransport>();
  t->on("/svc/translate", [](const nlohmann::json&) { return json_response({{"text", "  "}}); });
  ServiceAugmenter svc(stub_config(), t);
  try {
    svc.translate({"hello", "en", "de"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

TEST(Augment, KeepsLabelAndSubclass) {
  const auto th = thesaurus_of("good\tfine\nbad\tpoor\n");
  const std::vector<corpus::Instance> seeds = {
      make_instance("s1", "a good day", "pos", std::string("weather")),
      make_instance("s2", "a bad day", "neg", std::string("mood"))};
  AugmentContext ctx;
  ctx.thesaurus = &th;
  AugmenterConfig cfg;
  cfg.replace_rate = 1.0;
  const auto out = augment(seeds, 5, Method::kSynonyms, ctx, cfg);
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& src = seeds[i % 2];
    EXPECT_EQ(out[i].label, src.label);
    EXPECT_EQ(out[i].subclass, src.subclass);
    EXPECT_EQ(out[i].role, corpus::Role::kTrain);
  }
  EXPECT_EQ(out[0].text, "a fine day");
  EXPECT_EQ(out[1].text, "a poor day");
  EXPECT_TRUE(augment({}, 0, Method::kSynonyms, ctx, cfg).empty());
  EXPECT_THROW(augment({}, 1, Method::kSynonyms, ctx, cfg), Error);
  EXPECT_THROW(augment(seeds, 1, Method::kMlm, ctx, cfg), Error);
}

TEST(Augment, MethodNames) {
  for (auto m : {Method::kSynonyms, Method::kEmbeddings, Method::kMlm, Method::kTranslate}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("eda"), Error);
}

}  // namespace
}  // namespace augwork::baselines
