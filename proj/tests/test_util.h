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

#ifndef AUGWORK_TESTS_TEST_UTIL_H_
#define AUGWORK_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "augwork/corpus.h"

namespace augwork::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(AUGWORK_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("augwork-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline corpus::Instance make_instance(const std::string& id, const std::string& text,
                                      const std::string& label,
                                      std::optional<std::string> subclass = std::nullopt,
                                      corpus::Role role = corpus::Role::kTrain) {
  corpus::Instance i;
  i.id = id;
  i.text = text;
  i.label = label;
  i.subclass = std::move(subclass);
  i.role = role;
  return i;
}

inline corpus::LabeledDataset make_dataset(std::vector<corpus::Instance> instances,
                                           const std::string& name = "fixture") {
  corpus::LabeledDataset ds;
  ds.name = name;
  for (const auto& i : instances) {
    if (i.label.empty()) continue;
    if (i.subclass) {
      ds.hierarchy.add_subclass(*i.subclass, i.label);
    } else {
      ds.hierarchy.add_class(i.label);
    }
  }
  ds.instances = std::move(instances);
  return ds;
}

}  // namespace augwork::testing

#endif  // AUGWORK_TESTS_TEST_UTIL_H_
