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

#ifndef AUGWORK_CSV_H_
#define AUGWORK_CSV_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace augwork::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line the record starts on
};

// Streaming RFC 4180 reader: quoted fields may contain commas, doubled
// quotes and line breaks. CRLF and LF record terminators are accepted.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns the next record, or nullopt at end of input. Throws
  // Error(kMalformedRecord) on an unterminated quoted field or on stray
  // characters after a closing quote.
  std::optional<Row> next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

std::string quote_field(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace augwork::csv

#endif  // AUGWORK_CSV_H_
