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

#ifndef AUGWORK_REVIEW_H_
#define AUGWORK_REVIEW_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "augwork/corpus.h"
#include "augwork/error.h"
#include "augwork/seedselect.h"

// Expert seed-review sessions: candidate sampling, verdicts, explicit
// consensus and export, persisted as a per-session JSONL event journal.
namespace augwork::review {

enum class SessionState { kOpen, kClosed };
std::string_view to_string(SessionState s);

struct Candidate {
  std::string instance_id;
  std::string cls;
  std::optional<std::string> subclass;
  std::string text;
  std::size_t position = 0;  // order of delivery within the session

  nlohmann::json to_json() const;
  static Candidate from_json(const nlohmann::json& j);
  bool operator==(const Candidate&) const = default;
};

struct Tally {
  std::size_t good = 0;
  std::size_t bad = 0;
  std::size_t unsure = 0;
  std::size_t pending = 0;  // candidates without consensus
  bool operator==(const Tally&) const = default;
};

struct Session {
  std::string id;
  std::string dataset;
  std::size_t per_class = 20;
  corpus::Unit unit = corpus::Unit::kPassage;
  std::uint64_t rng_seed = 0;
  std::vector<Candidate> candidates;  // delivery order
  std::map<std::pair<std::string, std::string>, seedselect::Verdict> verdicts;  // (annotator, id)
  std::map<std::string, seedselect::Verdict> consensus;
  SessionState state = SessionState::kOpen;
  std::uint64_t version = 0;  // sequence number of the last applied event

  const Candidate* find(const std::string& instance_id) const;
  std::vector<std::string> classes() const;
  // Consensus tallies per class.
  std::map<std::string, Tally> tallies() const;
  nlohmann::json to_json() const;
  static Session from_json(const nlohmann::json& j);
  bool operator==(const Session&) const = default;
};

struct ExportResult {
  seedselect::VerdictSheet sheet;  // good consensus entries, annotator "consensus"
  std::map<std::string, Tally> summary;

  // {"entries": [...], "summary": {class: {good, bad, unsure}}, "totals": {...}}
  nlohmann::json to_json() const;
};

// Candidates per class sampled without replacement from the train pool of
// `dataset` (split into sentences first when unit is sentence and the data
// is passage-level). Throws Error(kInsufficientData) naming the class.
std::vector<Candidate> sample_candidates(const corpus::LabeledDataset& dataset,
                                         std::size_t per_class, corpus::Unit unit,
                                         std::uint64_t rng_seed);

struct StoreOptions {
  std::string directory;             // empty: in-memory only
  std::size_t snapshot_every = 50;   // events between snapshots
  bool fsync = true;
};

class ReviewStore {
 public:
  explicit ReviewStore(StoreOptions options = {});
  ~ReviewStore();
  ReviewStore(const ReviewStore&) = delete;
  ReviewStore& operator=(const ReviewStore&) = delete;

  void add_dataset(const std::string& name, corpus::LabeledDataset dataset);
  std::vector<std::string> dataset_names() const;

  // Replays every session found under the store directory.
  void recover();

  Session create_session(const std::string& dataset, std::size_t per_class, corpus::Unit unit,
                         std::uint64_t rng_seed);
  Session get(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;
  // Candidates of one class (all when cls is empty); the delivery is
  // recorded in the journal.
  std::vector<Candidate> candidates(const std::string& session_id, const std::string& cls);

  // Errors: unknown session or non-candidate id -> kNotFound; closed
  // session -> kConflict.
  Session record_verdict(const std::string& session_id, const std::string& annotator,
                         const std::string& instance_id, seedselect::Verdict verdict);
  Session set_consensus(const std::string& session_id, const std::string& instance_id,
                        seedselect::Verdict verdict);
  // kConflict when a candidate lacks consensus or the session is closed.
  Session close(const std::string& session_id);
  // kConflict while the session is open.
  ExportResult export_good(const std::string& session_id) const;

  // Overrides the random session id source (tests).
  void set_id_source(std::function<std::string()> source);

 private:
  struct Entry;
  std::shared_ptr<Entry> entry(const std::string& session_id) const;
  void append(Entry& e, nlohmann::json event);

  StoreOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, corpus::LabeledDataset> datasets_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::function<std::string()> id_source_;
};

// Random 128-bit hex token.
std::string random_session_id();

// REST routing decoupled from the HTTP server.
struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
};

class ReviewApi {
 public:
  explicit ReviewApi(ReviewStore& store) : store_(store) {}

  // POST /sessions, GET /sessions/{id}, GET /sessions/{id}/candidates,
  // POST /sessions/{id}/verdicts, POST /sessions/{id}/consensus,
  // POST /sessions/{id}/close, GET /sessions/{id}/export, GET /datasets,
  // GET /health. Failures return {"error": {"code", "message"}}.
  ApiResponse handle(const ApiRequest& request);

 private:
  ReviewStore& store_;
};

int http_status(ErrorCode code);

}  // namespace augwork::review

#endif  // AUGWORK_REVIEW_H_
