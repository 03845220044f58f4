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

#include "augwork/csv.h"

#include "augwork/error.h"

namespace augwork::csv {

std::optional<Row> Reader::next() {
  int c = in_.get();
  if (c == EOF) return std::nullopt;

  Row row;
  row.line = line_;
  std::string field;
  bool quoted = false;
  bool after_quote = false;

  auto finish_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    quoted = false;
    after_quote = false;
  };

  for (;; c = in_.get()) {
    if (quoted) {
      if (c == EOF) {
        throw Error(ErrorCode::kMalformedRecord,
                    "line " + std::to_string(row.line) +
                        ": unterminated quoted field");
      }
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
        continue;
      }
      if (c == '\n') ++line_;
      field.push_back(static_cast<char>(c));
      continue;
    }
    if (c == EOF || c == '\n' || (c == '\r' && in_.peek() == '\n')) {
      if (c == '\r') in_.get();
      if (c != EOF) ++line_;
      finish_field();
      return row;
    }
    if (c == ',') {
      finish_field();
      continue;
    }
    if (after_quote) {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(line_) +
                      ": unexpected character after closing quote");
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      continue;
    }
    field.push_back(static_cast<char>(c));
  }
}

std::string quote_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote_field(fields[i]);
  }
  return out;
}

}  // namespace augwork::csv
