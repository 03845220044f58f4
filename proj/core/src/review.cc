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

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "augwork/rng.h"
#include "augwork/text.h"

namespace augwork::review {

namespace fs = std::filesystem;
using seedselect::Verdict;

std::string_view to_string(SessionState s) { return s == SessionState::kOpen ? "open" : "closed"; }

nlohmann::json Candidate::to_json() const {
  nlohmann::json j = {{"instance_id", instance_id}, {"class", cls}, {"text", text},
                      {"position", position}};
  j["subclass"] = subclass ? nlohmann::json(*subclass) : nlohmann::json(nullptr);
  return j;
}

Candidate Candidate::from_json(const nlohmann::json& j) {
  Candidate c;
  c.instance_id = j.at("instance_id").get<std::string>();
  c.cls = j.at("class").get<std::string>();
  c.text = j.at("text").get<std::string>();
  c.position = j.at("position").get<std::size_t>();
  if (j.contains("subclass") && j.at("subclass").is_string()) c.subclass = j.at("subclass").get<std::string>();
  return c;
}

const Candidate* Session::find(const std::string& instance_id) const {
  for (const auto& c : candidates) {
    if (c.instance_id == instance_id) return &c;
  }
  return nullptr;
}

std::vector<std::string> Session::classes() const {
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    if (std::find(out.begin(), out.end(), c.cls) == out.end()) out.push_back(c.cls);
  }
  return out;
}

std::map<std::string, Tally> Session::tallies() const {
  std::map<std::string, Tally> out;
  for (const auto& c : candidates) {
    auto& t = out[c.cls];
    auto it = consensus.find(c.instance_id);
    if (it == consensus.end()) {
      ++t.pending;
      continue;
    }
    switch (it->second) {
      case Verdict::kGood: ++t.good; break;
      case Verdict::kBad: ++t.bad; break;
      case Verdict::kUnsure: ++t.unsure; break;
    }
  }
  return out;
}

namespace {

nlohmann::json tally_json(const Tally& t) {
  return {{"good", t.good}, {"bad", t.bad}, {"unsure", t.unsure}, {"pending", t.pending}};
}

nlohmann::json tallies_json(const std::map<std::string, Tally>& tallies) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [cls, t] : tallies) j[cls] = tally_json(t);
  return j;
}

}  // namespace

nlohmann::json Session::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["dataset"] = dataset;
  j["per_class"] = per_class;
  j["unit"] = corpus::to_string(unit);
  j["rng_seed"] = rng_seed;
  j["state"] = to_string(state);
  j["version"] = version;
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : candidates) j["candidates"].push_back(c.to_json());
  j["verdicts"] = nlohmann::json::array();
  for (const auto& [key, v] : verdicts) {
    j["verdicts"].push_back(
        {{"annotator", key.first}, {"instance_id", key.second}, {"verdict", seedselect::to_string(v)}});
  }
  j["consensus"] = nlohmann::json::object();
  for (const auto& [cid, v] : consensus) j["consensus"][cid] = seedselect::to_string(v);
  return j;
}

Session Session::from_json(const nlohmann::json& j) {
  Session s;
  s.id = j.at("id").get<std::string>();
  s.dataset = j.at("dataset").get<std::string>();
  s.per_class = j.at("per_class").get<std::size_t>();
  s.unit = corpus::parse_unit(j.at("unit").get<std::string>());
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  s.state = j.at("state").get<std::string>() == "closed" ? SessionState::kClosed : SessionState::kOpen;
  s.version = j.value("version", std::uint64_t{0});
  for (const auto& c : j.at("candidates")) s.candidates.push_back(Candidate::from_json(c));
  for (const auto& v : j.at("verdicts")) {
    s.verdicts[{v.at("annotator").get<std::string>(), v.at("instance_id").get<std::string>()}] =
        seedselect::parse_verdict(v.at("verdict").get<std::string>());
  }
  for (const auto& [cid, v] : j.at("consensus").items()) {
    s.consensus[cid] = seedselect::parse_verdict(v.get<std::string>());
  }
  return s;
}

nlohmann::json ExportResult::to_json() const {
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : sheet.entries) {
    j["entries"].push_back({{"instance_id", e.instance_id},
                            {"verdict", seedselect::to_string(e.verdict)},
                            {"annotator", e.annotator}});
  }
  Tally total;
  j["summary"] = nlohmann::json::object();
  for (const auto& [cls, t] : summary) {
    j["summary"][cls] = {{"good", t.good}, {"bad", t.bad}, {"unsure", t.unsure}};
    total.good += t.good;
    total.bad += t.bad;
    total.unsure += t.unsure;
  }
  j["totals"] = {{"good", total.good}, {"bad", total.bad}, {"unsure", total.unsure}};
  j["jsonl"] = sheet.to_jsonl();
  return j;
}

std::vector<Candidate> sample_candidates(const corpus::LabeledDataset& dataset,
                                         std::size_t per_class, corpus::Unit unit,
                                         std::uint64_t rng_seed) {
  if (per_class == 0) throw Error(ErrorCode::kInvalidInput, "per_class must be positive");
  const bool needs_split =
      unit == corpus::Unit::kSentence &&
      std::any_of(dataset.instances.begin(), dataset.instances.end(),
                  [](const auto& i) { return i.unit == corpus::Unit::kPassage; });
  const corpus::LabeledDataset source =
      needs_split ? corpus::split_sentences(dataset, corpus::default_abbreviations()) : dataset;
  std::vector<Candidate> out;
  for (const auto& [cls, members] : source.train_by_class()) {
    if (members.size() < per_class) {
      throw Error(ErrorCode::kInsufficientData,
                  "class '" + cls + "' has " + std::to_string(members.size()) +
                      " train instances, fewer than per_class=" + std::to_string(per_class));
    }
    Rng rng(derive_seed(rng_seed, "review:" + cls));
    for (auto idx : rng.sample_indices(members.size(), per_class)) {
      const auto& m = members[idx];
      out.push_back({m.id, cls, m.subclass, m.text, out.size()});
    }
  }
  for (const auto& cls : source.hierarchy.classes()) {
    if (!source.train_by_class().count(cls)) {
      throw Error(ErrorCode::kInsufficientData, "class '" + cls + "' has no train instances");
    }
  }
  return out;
}

std::string random_session_id() {
  std::random_device rd;
  std::uint64_t hi = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::uint64_t lo = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

struct ReviewStore::Entry {
  std::mutex mu;
  Session session;
  fs::path dir;
  int fd = -1;
  std::size_t since_snapshot = 0;

  ~Entry() {
    if (fd >= 0) ::close(fd);
  }
};

namespace {

void apply_event(Session& s, const nlohmann::json& ev) {
  const auto type = ev.at("type").get<std::string>();
  if (type == "created") {
    s = Session::from_json(ev.at("session"));
  } else if (type == "verdict") {
    s.verdicts[{ev.at("annotator").get<std::string>(), ev.at("instance_id").get<std::string>()}] =
        seedselect::parse_verdict(ev.at("verdict").get<std::string>());
  } else if (type == "consensus") {
    s.consensus[ev.at("instance_id").get<std::string>()] =
        seedselect::parse_verdict(ev.at("verdict").get<std::string>());
  } else if (type == "closed") {
    s.state = SessionState::kClosed;
  } else if (type != "served") {
    throw Error(ErrorCode::kMalformedRecord, "unknown journal event: " + type);
  }
  s.version = ev.at("seq").get<std::uint64_t>();
}

void write_all(int fd, const std::string& data, const fs::path& path) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "write to " + path.string() + ": " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

void write_file_durably(const fs::path& path, const std::string& data, bool sync) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot create " + tmp.string());
  try {
    write_all(fd, data, tmp);
    if (sync && ::fsync(fd) != 0) throw Error(ErrorCode::kIo, "fsync " + tmp.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  fs::rename(tmp, path);
}

}  // namespace

ReviewStore::ReviewStore(StoreOptions options) : options_(std::move(options)) {
  if (!options_.directory.empty()) fs::create_directories(options_.directory);
}

ReviewStore::~ReviewStore() = default;

void ReviewStore::add_dataset(const std::string& name, corpus::LabeledDataset dataset) {
  std::lock_guard lock(mu_);
  datasets_[name] = std::move(dataset);
}

std::vector<std::string> ReviewStore::dataset_names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, d] : datasets_) out.push_back(name);
  return out;
}

void ReviewStore::set_id_source(std::function<std::string()> source) {
  std::lock_guard lock(mu_);
  id_source_ = std::move(source);
}

std::shared_ptr<ReviewStore::Entry> ReviewStore::entry(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session: " + session_id);
  return it->second;
}

void ReviewStore::append(Entry& e, nlohmann::json event) {
  event["seq"] = e.session.version + 1;
  if (!e.dir.empty()) {
    if (e.fd < 0) {
      const fs::path journal = e.dir / "journal.jsonl";
      e.fd = ::open(journal.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
      if (e.fd < 0) throw Error(ErrorCode::kIo, "cannot open " + journal.string());
    }
    write_all(e.fd, event.dump() + "\n", e.dir / "journal.jsonl");
    if (options_.fsync && ::fsync(e.fd) != 0) {
      throw Error(ErrorCode::kIo, "fsync failed for session " + e.session.id);
    }
  }
  apply_event(e.session, event);
  if (!e.dir.empty() && options_.snapshot_every > 0 && ++e.since_snapshot >= options_.snapshot_every) {
    write_file_durably(e.dir / "snapshot.json", e.session.to_json().dump(), options_.fsync);
    e.since_snapshot = 0;
  }
}

void ReviewStore::recover() {
  if (options_.directory.empty()) return;
  std::lock_guard lock(mu_);
  for (const auto& d : fs::directory_iterator(options_.directory)) {
    if (!d.is_directory()) continue;
    auto e = std::make_shared<Entry>();
    e->dir = d.path();
    const fs::path snap = e->dir / "snapshot.json";
    if (fs::exists(snap)) {
      std::ifstream in(snap);
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        e->session = Session::from_json(nlohmann::json::parse(ss.str()));
      } catch (const std::exception& ex) {
        throw Error(ErrorCode::kMalformedRecord, "snapshot " + snap.string() + ": " + ex.what());
      }
    }
    std::ifstream journal(e->dir / "journal.jsonl");
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> lines;
    while (std::getline(journal, line)) lines.push_back(line);
    for (const auto& l : lines) {
      ++lineno;
      if (l.empty()) continue;
      nlohmann::json ev;
      try {
        ev = nlohmann::json::parse(l);
      } catch (const nlohmann::json::exception&) {
        // A torn final line is an unacknowledged write.
        if (lineno == lines.size()) break;
        throw Error(ErrorCode::kMalformedRecord,
                    "journal " + e->dir.string() + " line " + std::to_string(lineno));
      }
      if (ev.at("seq").get<std::uint64_t>() <= e->session.version) continue;
      apply_event(e->session, ev);
    }
    if (e->session.id.empty()) continue;
    sessions_[e->session.id] = e;
  }
}

Session ReviewStore::create_session(const std::string& dataset, std::size_t per_class,
                                    corpus::Unit unit, std::uint64_t rng_seed) {
  std::vector<Candidate> candidates;
  std::string id;
  {
    std::lock_guard lock(mu_);
    auto it = datasets_.find(dataset);
    if (it == datasets_.end()) throw Error(ErrorCode::kNotFound, "unknown dataset: " + dataset);
    candidates = sample_candidates(it->second, per_class, unit, rng_seed);
    do {
      id = id_source_ ? id_source_() : random_session_id();
    } while (sessions_.count(id));
  }
  auto e = std::make_shared<Entry>();
  if (!options_.directory.empty()) {
    e->dir = fs::path(options_.directory) / id;
    fs::create_directories(e->dir);
  }
  Session s;
  s.id = id;
  s.dataset = dataset;
  s.per_class = per_class;
  s.unit = unit;
  s.rng_seed = rng_seed;
  s.candidates = std::move(candidates);
  {
    std::lock_guard elock(e->mu);
    append(*e, {{"type", "created"}, {"session", s.to_json()}});
  }
  std::lock_guard lock(mu_);
  sessions_[id] = e;
  return e->session;
}

Session ReviewStore::get(const std::string& session_id) const {
  auto e = entry(session_id);
  std::lock_guard lock(e->mu);
  return e->session;
}

std::vector<std::string> ReviewStore::session_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

std::vector<Candidate> ReviewStore::candidates(const std::string& session_id, const std::string& cls) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mu);
  std::vector<Candidate> out;
  for (const auto& c : e->session.candidates) {
    if (cls.empty() || c.cls == cls) out.push_back(c);
  }
  if (!cls.empty() && out.empty()) {
    throw Error(ErrorCode::kNotFound, "session has no candidates for class: " + cls);
  }
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& c : out) ids.push_back(c.instance_id);
  append(*e, {{"type", "served"}, {"class", cls}, {"instance_ids", ids}});
  return out;
}

namespace {

void require_open_candidate(const Session& s, const std::string& instance_id) {
  if (!s.find(instance_id)) {
    throw Error(ErrorCode::kNotFound, "instance is not a candidate of this session: " + instance_id);
  }
  if (s.state != SessionState::kOpen) throw Error(ErrorCode::kConflict, "session is closed");
}

}  // namespace

Session ReviewStore::record_verdict(const std::string& session_id, const std::string& annotator,
                                    const std::string& instance_id, Verdict verdict) {
  if (text::trim(annotator).empty()) throw Error(ErrorCode::kInvalidInput, "annotator is required");
  auto e = entry(session_id);
  std::lock_guard lock(e->mu);
  require_open_candidate(e->session, instance_id);
  append(*e, {{"type", "verdict"},
              {"annotator", annotator},
              {"instance_id", instance_id},
              {"verdict", seedselect::to_string(verdict)}});
  return e->session;
}

Session ReviewStore::set_consensus(const std::string& session_id, const std::string& instance_id,
                                   Verdict verdict) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mu);
  require_open_candidate(e->session, instance_id);
  append(*e, {{"type", "consensus"},
              {"instance_id", instance_id},
              {"verdict", seedselect::to_string(verdict)}});
  return e->session;
}

Session ReviewStore::close(const std::string& session_id) {
  auto e = entry(session_id);
  std::lock_guard lock(e->mu);
  if (e->session.state == SessionState::kClosed) {
    throw Error(ErrorCode::kConflict, "session is already closed");
  }
  std::size_t missing = 0;
  for (const auto& c : e->session.candidates) {
    if (!e->session.consensus.count(c.instance_id)) ++missing;
  }
  if (missing) {
    throw Error(ErrorCode::kConflict,
                std::to_string(missing) + " candidates have no consensus verdict");
  }
  append(*e, {{"type", "closed"}});
  return e->session;
}

ExportResult ReviewStore::export_good(const std::string& session_id) const {
  auto e = entry(session_id);
  std::lock_guard lock(e->mu);
  const Session& s = e->session;
  if (s.state != SessionState::kClosed) {
    throw Error(ErrorCode::kConflict, "session must be closed before export");
  }
  ExportResult out;
  for (const auto& c : s.candidates) {
    auto it = s.consensus.find(c.instance_id);
    if (it != s.consensus.end() && it->second == Verdict::kGood) {
      out.sheet.entries.push_back(
          {c.instance_id, Verdict::kGood, std::string(seedselect::kConsensusAnnotator)});
    }
  }
  out.summary = s.tallies();
  return out;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kInvalidInput:
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kUsage:
    case ErrorCode::kProtocol:
    case ErrorCode::kHierarchyConflict: return 400;
    default: return 500;
  }
}

namespace {

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

nlohmann::json parse_body(const std::string& body) {
  if (text::trim(body).empty()) return nlohmann::json::object();
  try {
    auto j = nlohmann::json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("request body is not JSON: ") + e.what());
  }
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::kInvalidInput, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kInvalidInput, std::string("field '") + key + "' has the wrong type");
  }
}

Verdict verdict_field(const nlohmann::json& j) {
  try {
    return seedselect::parse_verdict(field<std::string>(j, "verdict"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidInput, e.what());
  }
}

nlohmann::json session_view(const Session& s) {
  auto j = s.to_json();
  j["tallies"] = tallies_json(s.tallies());
  return j;
}

}  // namespace

ApiResponse ReviewApi::handle(const ApiRequest& req) {
  try {
    const auto parts = split_path(req.path);
    const std::string& m = req.method;
    if (parts.size() == 1 && parts[0] == "health" && m == "GET") return {200, {{"status", "ok"}}};
    if (parts.size() == 1 && parts[0] == "datasets" && m == "GET") {
      return {200, {{"datasets", store_.dataset_names()}}};
    }
    if (parts.empty() || parts[0] != "sessions") {
      return error_response(404, "not_found", "no route for " + req.path);
    }
    if (parts.size() == 1) {
      if (m == "GET") return {200, {{"sessions", store_.session_ids()}}};
      if (m != "POST") return error_response(405, "method_not_allowed", m + " " + req.path);
      const auto body = parse_body(req.body);
      std::size_t per_class = body.contains("per_class") ? field<std::size_t>(body, "per_class") : 20;
      corpus::Unit unit = corpus::Unit::kPassage;
      if (body.contains("unit")) {
        try {
          unit = corpus::parse_unit(field<std::string>(body, "unit"));
        } catch (const Error& e) {
          throw Error(ErrorCode::kInvalidInput, e.what());
        }
      }
      const std::uint64_t seed = body.contains("rng_seed") ? field<std::uint64_t>(body, "rng_seed") : 0;
      auto s = store_.create_session(field<std::string>(body, "dataset"), per_class, unit, seed);
      return {201, session_view(s)};
    }
    const std::string& id = parts[1];
    if (parts.size() == 2) {
      if (m != "GET") return error_response(405, "method_not_allowed", m + " " + req.path);
      return {200, session_view(store_.get(id))};
    }
    if (parts.size() != 3) return error_response(404, "not_found", "no route for " + req.path);
    const std::string& action = parts[2];
    if (action == "candidates" && m == "GET") {
      auto it = req.query.find("class");
      const auto list = store_.candidates(id, it == req.query.end() ? "" : it->second);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : list) arr.push_back(c.to_json());
      return {200, {{"candidates", arr}}};
    }
    if (action == "verdicts" && m == "POST") {
      const auto body = parse_body(req.body);
      auto s = store_.record_verdict(id, field<std::string>(body, "annotator"),
                                     field<std::string>(body, "instance_id"), verdict_field(body));
      return {200, session_view(s)};
    }
    if (action == "consensus" && m == "POST") {
      const auto body = parse_body(req.body);
      auto s = store_.set_consensus(id, field<std::string>(body, "instance_id"), verdict_field(body));
      return {200, session_view(s)};
    }
    if (action == "close" && m == "POST") return {200, session_view(store_.close(id))};
    if (action == "export" && m == "GET") return {200, store_.export_good(id).to_json()};
    return error_response(404, "not_found", "no route for " + m + " " + req.path);
  } catch (const Error& e) {
    return error_response(http_status(e.code()), error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

}  // namespace augwork::review
