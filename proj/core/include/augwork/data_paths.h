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

#ifndef AUGWORK_DATA_PATHS_H_
#define AUGWORK_DATA_PATHS_H_

#include <filesystem>
#include <string_view>

namespace augwork {

// Resolves a bundled resource (lexicon, suffix rules, thesaurus, ...).
// Lookup order: $AUGWORK_DATA_DIR, the source tree, the install prefix,
// then share/augwork next to the running executable's bin directory.
std::filesystem::path data_file(std::string_view name);

}  // namespace augwork

#endif  // AUGWORK_DATA_PATHS_H_
