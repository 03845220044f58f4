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

#include "augwork/review.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "augwork/error.h"
#include "augwork/review_server.h"
#include "augwork/service_client.h"
#include "table2_replay.h"
#include "test_util.h"

namespace augwork::review {
namespace {

using augwork::testing::fixture_path;
using augwork::testing::make_dataset;
using augwork::testing::make_instance;
using augwork::testing::TempDir;
using seedselect::Verdict;

corpus::LabeledDataset five_classes(std::size_t per_class = 25) {
  std::vector<corpus::Instance> v;
  for (int c = 0; c < 5; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::string id = "c" + std::to_string(c) + "-" + std::to_string(i);
      v.push_back(make_instance(id, "Passage " + id + " first part. Then a second sentence.",
                                "class" + std::to_string(c)));
    }
  }
  return make_dataset(v, "five");
}

std::unique_ptr<ReviewStore> memory_store() {
  auto s = std::make_unique<ReviewStore>();
  s->add_dataset("five", five_classes());
  return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kUsage;
}

TEST(Candidates, PerClassSampleIsDeterministic) {
  const auto ds = five_classes();
  const auto a = sample_candidates(ds, 20, corpus::Unit::kPassage, 3);
  ASSERT_EQ(a.size(), 100u);
  std::map<std::string, int> per;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++per[a[i].cls];
    ids.insert(a[i].instance_id);
    EXPECT_EQ(a[i].position, i);
  }
  EXPECT_EQ(ids.size(), 100u);
  for (const auto& [cls, n] : per) EXPECT_EQ(n, 20);
  EXPECT_EQ(sample_candidates(ds, 20, corpus::Unit::kPassage, 3), a);
  EXPECT_NE(sample_candidates(ds, 20, corpus::Unit::kPassage, 4), a);
  const auto sentences = sample_candidates(ds, 20, corpus::Unit::kSentence, 3);
  EXPECT_NE(sentences[0].instance_id.find('#'), std::string::npos);
  EXPECT_EQ(code_of([&] { sample_candidates(ds, 26, corpus::Unit::kPassage, 3); }),
            ErrorCode::kInsufficientData);
}

TEST(Store, VerdictsLastWriteWinsPerAnnotator) {
  auto store = memory_store();
  const auto s = store->create_session("five", 20, corpus::Unit::kPassage, 1);
  EXPECT_EQ(s.id.size(), 32u);
  const auto id = s.candidates[0].instance_id;
  store->record_verdict(s.id, "ann1", id, Verdict::kGood);
  store->record_verdict(s.id, "ann1", id, Verdict::kBad);
  const auto after = store->record_verdict(s.id, "ann2", id, Verdict::kGood);
  EXPECT_EQ(after.verdicts.size(), 2u);
  EXPECT_EQ(after.verdicts.at({"ann1", id}), Verdict::kBad);
  EXPECT_EQ(after.verdicts.at({"ann2", id}), Verdict::kGood);
  EXPECT_EQ(after.tallies().at(s.candidates[0].cls).pending, 20u);
  EXPECT_EQ(code_of([&] { store->record_verdict(s.id, "ann1", "nope", Verdict::kGood); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(code_of([&] { store->get("missing"); }), ErrorCode::kNotFound);
}

TEST(Store, CloseNeedsConsensusAndExportNeedsClose) {
  auto store = memory_store();
  const auto s = store->create_session("five", 20, corpus::Unit::kPassage, 1);
  EXPECT_EQ(code_of([&] { store->export_good(s.id); }), ErrorCode::kConflict);
  for (std::size_t i = 0; i + 1 < s.candidates.size(); ++i) {
    store->set_consensus(s.id, s.candidates[i].instance_id, i % 3 ? Verdict::kGood : Verdict::kBad);
  }
  EXPECT_EQ(code_of([&] { store->close(s.id); }), ErrorCode::kConflict);
  store->set_consensus(s.id, s.candidates.back().instance_id, Verdict::kUnsure);
  const auto closed = store->close(s.id);
  EXPECT_EQ(closed.state, SessionState::kClosed);
  EXPECT_EQ(code_of([&] { store->close(s.id); }), ErrorCode::kConflict);
  EXPECT_EQ(code_of([&] { store->record_verdict(s.id, "a", s.candidates[0].instance_id, Verdict::kBad); }),
            ErrorCode::kConflict);
  const auto e1 = store->export_good(s.id).to_json();
  const auto e2 = store->export_good(s.id).to_json();
  EXPECT_EQ(e1, e2);
  std::size_t good = 0;
  for (std::size_t i = 0; i + 1 < s.candidates.size(); ++i) good += (i % 3) != 0;
  EXPECT_EQ(e1.at("entries").size(), good);
  EXPECT_EQ(e1.at("totals").at("good"), good);
  EXPECT_EQ(e1.at("totals").at("unsure"), 1);
}

TEST(Store, SessionJsonRoundTrip) {
  auto store = memory_store();
  const auto s = store->create_session("five", 3, corpus::Unit::kSentence, 9);
  store->record_verdict(s.id, "x", s.candidates[1].instance_id, Verdict::kUnsure);
  const auto now = store->set_consensus(s.id, s.candidates[2].instance_id, Verdict::kGood);
  EXPECT_EQ(Session::from_json(nlohmann::json::parse(now.to_json().dump())), now);
}

void populate(ReviewStore& store, const Session& s, std::size_t upto) {
  for (std::size_t i = 0; i < upto; ++i) {
    store.record_verdict(s.id, "ann", s.candidates[i].instance_id, Verdict::kGood);
  }
}

TEST(Store, RecoversFromJournalAndSnapshots) {
  TempDir dir;
  Session before;
  {
    ReviewStore store({dir.path().string(), 7, false});
    store.add_dataset("five", five_classes());
    before = store.create_session("five", 20, corpus::Unit::kPassage, 2);
    populate(store, before, 30);
    store.candidates(before.id, "class1");
    before = store.set_consensus(before.id, before.candidates[0].instance_id, Verdict::kBad);
  }
  ReviewStore again({dir.path().string(), 7, false});
  again.add_dataset("five", five_classes());
  again.recover();
  EXPECT_EQ(again.session_ids(), std::vector<std::string>{before.id});
  EXPECT_EQ(again.get(before.id), before);
  const auto more = again.record_verdict(before.id, "ann", before.candidates[40].instance_id, Verdict::kBad);
  EXPECT_EQ(more.version, before.version + 1);
}

TEST(Store, TornFinalLineIsDropped) {
  TempDir dir;
  Session before;
  std::filesystem::path session_dir;
  {
    ReviewStore store({dir.path().string(), 1000, false});
    store.add_dataset("five", five_classes());
    before = store.create_session("five", 20, corpus::Unit::kPassage, 2);
    populate(store, before, 5);
    before = store.get(before.id);
  }
  for (const auto& d : std::filesystem::directory_iterator(dir.path())) session_dir = d.path();
  {
    std::ofstream j(session_dir / "journal.jsonl", std::ios::app);
    j << "{\"type\": \"verdict\", \"annot";
  }
  ReviewStore torn({dir.path().string(), 1000, false});
  torn.recover();
  EXPECT_EQ(torn.get(before.id), before);
  {
    std::ofstream j(session_dir / "journal.jsonl", std::ios::app);
    j << "\n{\"type\": \"closed\", \"seq\": 99}\n";
  }
  ReviewStore corrupt({dir.path().string(), 1000, false});
  EXPECT_EQ(code_of([&] { corrupt.recover(); }), ErrorCode::kMalformedRecord);
}

ApiResponse call(ReviewApi& api, const std::string& method, const std::string& path,
                 const nlohmann::json& body = nullptr, std::map<std::string, std::string> query = {}) {
  return api.handle({method, path, std::move(query), body.is_null() ? "" : body.dump()});
}

TEST(Api, SessionLifecycle) {
  auto store = memory_store();
  int n = 0;
  store->set_id_source([&] { return "sess" + std::to_string(n++); });
  ReviewApi api(*store);
  EXPECT_EQ(call(api, "GET", "/health").body.at("status"), "ok");
  EXPECT_EQ(call(api, "GET", "/datasets").body.at("datasets"), nlohmann::json::array({"five"}));
  auto created = call(api, "POST", "/sessions", {{"dataset", "five"}, {"per_class", 2}, {"rng_seed", 4}});
  ASSERT_EQ(created.status, 201);
  EXPECT_EQ(created.body.at("id"), "sess0");
  EXPECT_EQ(created.body.at("candidates").size(), 10u);
  EXPECT_EQ(created.body.at("tallies").at("class0").at("pending"), 2);
  const auto listed = call(api, "GET", "/sessions/sess0/candidates", nullptr, {{"class", "class3"}});
  ASSERT_EQ(listed.status, 200);
  ASSERT_EQ(listed.body.at("candidates").size(), 2u);
  EXPECT_EQ(listed.body.at("candidates")[0].at("class"), "class3");
  for (const auto& c : created.body.at("candidates")) {
    const auto r = call(api, "POST", "/sessions/sess0/verdicts",
                        {{"annotator", "a"}, {"instance_id", c.at("instance_id")}, {"verdict", "good"}});
    ASSERT_EQ(r.status, 200) << r.body.dump();
    ASSERT_EQ(call(api, "POST", "/sessions/sess0/consensus",
                   {{"instance_id", c.at("instance_id")}, {"verdict", "good"}}).status, 200);
  }
  EXPECT_EQ(call(api, "GET", "/sessions/sess0/export").status, 409);
  EXPECT_EQ(call(api, "POST", "/sessions/sess0/close").status, 200);
  const auto exported = call(api, "GET", "/sessions/sess0/export");
  ASSERT_EQ(exported.status, 200);
  EXPECT_EQ(exported.body.at("totals").at("good"), 10);
  std::istringstream jsonl(exported.body.at("jsonl").get<std::string>());
  EXPECT_EQ(seedselect::VerdictSheet::read_jsonl(jsonl).entries.size(), 10u);
}

TEST(Api, ErrorsAreStructured) {
  auto store = memory_store();
  ReviewApi api(*store);
  const auto missing = call(api, "GET", "/sessions/zzz");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(missing.body.at("error").at("code"), "not_found");
  EXPECT_EQ(call(api, "GET", "/nowhere").status, 404);
  EXPECT_EQ(call(api, "DELETE", "/sessions").status, 405);
  EXPECT_EQ(api.handle({"POST", "/sessions", {}, "not json"}).status, 400);
  EXPECT_EQ(call(api, "POST", "/sessions", {{"per_class", 2}}).status, 400);
  EXPECT_EQ(call(api, "POST", "/sessions", {{"dataset", "nope"}}).status, 404);
  EXPECT_EQ(call(api, "POST", "/sessions", {{"dataset", "five"}, {"per_class", 500}}).status, 400);
  const auto s = call(api, "POST", "/sessions", {{"dataset", "five"}, {"per_class", 1}});
  const std::string base = "/sessions/" + s.body.at("id").get<std::string>();
  const auto iid = s.body.at("candidates")[0].at("instance_id");
  EXPECT_EQ(call(api, "POST", base + "/verdicts", {{"annotator", "a"}, {"instance_id", iid}, {"verdict", "meh"}}).status, 400);
  EXPECT_EQ(call(api, "POST", base + "/verdicts", {{"annotator", "a"}, {"instance_id", "x"}, {"verdict", "good"}}).status, 404);
  const auto conflict = call(api, "POST", base + "/close");
  EXPECT_EQ(conflict.status, 409);
  EXPECT_EQ(conflict.body.at("error").at("code"), "conflict");
}

TEST(Server, ServesOverHttp) {
  auto store = memory_store();
  ReviewServer server(*store, {"127.0.0.1", 0, "*"});
  const int port = server.start();
  ASSERT_GT(port, 0);
  auto t = service::make_http_transport(service::Endpoint::parse("http://127.0.0.1:" + std::to_string(port)),
                                        std::chrono::seconds(5));
  const auto created = t->post("/sessions", R"({"dataset": "five", "per_class": 1})",
                               {{"Content-Type", "application/json"}});
  ASSERT_EQ(created.status, 201) << created.body;
  const auto body = nlohmann::json::parse(created.body);
  const std::string id = body.at("id");
  const nlohmann::json verdict = {{"annotator", "web"}, {"instance_id", body.at("candidates")[0].at("instance_id")},
                                  {"verdict", "bad"}};
  const auto v = t->post("/sessions/" + id + "/verdicts", verdict.dump(), {{"Content-Type", "application/json"}});
  EXPECT_EQ(v.status, 200);
  const auto bad = t->post("/sessions/" + id + "/close", "", {});
  EXPECT_EQ(bad.status, 409);
  EXPECT_EQ(nlohmann::json::parse(bad.body).at("error").at("code"), "conflict");
  server.stop();
  EXPECT_EQ(store->get(id).verdicts.size(), 1u);
}

std::vector<std::size_t> column(const nlohmann::json& expected, const char* unit, const char* key) {
  return expected.at(unit).at(key).get<std::vector<std::size_t>>();
}

TEST(Replay, RecordedAnnotationReproducesCounts) {
  std::ifstream in(fixture_path("table2_expected.json"));
  const auto expected = nlohmann::json::parse(in);
  const auto themes = expected.at("themes").get<std::vector<std::string>>();
  for (const auto& [unit_name, unit] : {std::pair{"passages", corpus::Unit::kPassage},
                                        std::pair{"sentences", corpus::Unit::kSentence}}) {
    const auto out = augwork::testing::replay_review_script(
        fixture_path("table2_" + std::string(unit_name) + "_data.jsonl"),
        fixture_path("table2_" + std::string(unit_name) + "_script.jsonl"), unit);
    const auto good = column(expected, unit_name, "good");
    const auto bad = column(expected, unit_name, "bad");
    for (std::size_t i = 0; i < themes.size(); ++i) {
      EXPECT_EQ(out.tallies.at(themes[i]).good, good[i]) << unit_name << " " << themes[i];
      EXPECT_EQ(out.tallies.at(themes[i]).bad, bad[i]) << unit_name << " " << themes[i];
    }
  }
}

}  // namespace
}  // namespace augwork::review
