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

#ifndef AUGWORK_TESTS_TABLE2_REPLAY_H_
#define AUGWORK_TESTS_TABLE2_REPLAY_H_

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "augwork/corpus.h"
#include "augwork/review.h"

namespace augwork::testing {

struct ReplayOutcome {
  std::map<std::string, review::Tally> tallies;
  nlohmann::json exported;
};

// Drives a review session through the REST router with a recorded
// annotation script, then closes and exports it.
inline ReplayOutcome replay_review_script(const std::string& data_path,
                                          const std::string& script_path, corpus::Unit unit) {
  corpus::IngestOptions opts;
  opts.unit = unit;
  opts.name = "replay";
  review::ReviewStore store;
  store.add_dataset("replay", corpus::load_dataset(data_path, opts));
  review::ReviewApi api(store);
  auto call = [&](const std::string& method, const std::string& path, const nlohmann::json& body) {
    auto r = api.handle({method, path, {}, body.is_null() ? "" : body.dump()});
    if (r.status >= 300) throw std::runtime_error(path + ": " + r.body.dump());
    return r.body;
  };
  const auto created = call("POST", "/sessions",
                            {{"dataset", "replay"}, {"per_class", 20},
                             {"unit", std::string(corpus::to_string(unit))}, {"rng_seed", 1}});
  const std::string base = "/sessions/" + created.at("id").get<std::string>();
  call("GET", base + "/candidates", nullptr);
  std::ifstream in(script_path);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    auto op = nlohmann::json::parse(line);
    const std::string kind = op.at("op").get<std::string>();
    op.erase("op");
    call("POST", base + (kind == "verdict" ? "/verdicts" : "/consensus"), op);
  }
  call("POST", base + "/close", nullptr);
  ReplayOutcome out;
  out.exported = call("GET", base + "/export", nullptr);
  out.tallies = store.get(created.at("id").get<std::string>()).tallies();
  return out;
}

}  // namespace augwork::testing

#endif  // AUGWORK_TESTS_TABLE2_REPLAY_H_
