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

#include "augwork/data_paths.h"

#include <cstdlib>
#include <string>
#include <system_error>
#include <vector>

#include "augwork/error.h"

namespace augwork {

std::filesystem::path data_file(std::string_view name) {
  namespace fs = std::filesystem;
  if (const char* env = std::getenv("AUGWORK_DATA_DIR"); env && *env) {
    fs::path p = fs::path(env) / name;
    if (fs::exists(p)) return p;
  }
  std::vector<fs::path> dirs = {AUGWORK_SOURCE_DATA_DIR, AUGWORK_INSTALL_DATA_DIR};
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) dirs.push_back(exe.parent_path().parent_path() / "share" / "augwork");
  for (const auto& dir : dirs) {
    fs::path p = dir / name;
    if (fs::exists(p)) return p;
  }
  throw Error(ErrorCode::kIo,
              "bundled data file not found: " + std::string(name));
}

}  // namespace augwork
