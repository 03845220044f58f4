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

#ifndef AUGWORK_MODEL_IO_H_
#define AUGWORK_MODEL_IO_H_

#include <string>
#include <vector>

#include "augwork/textmodel.h"

// AWB1 model container. All integers little-endian.
//
//   magic    "AWB1"
//   u32      format version (1)
//   u32      section count N
//   N x {u32 section id, u64 byte offset from file start, u64 byte length}
//   section payloads
//
// Section ids:
//   1 header   u32 kind (0 embedding, 1 classifier), u64 dim, u64 buckets,
//              i32 minn, i32 maxn, u64 word_ngrams, u64 words, u64 labels
//   2 vocab    per word: u32 byte length, bytes
//   3 input    (words + buckets) x dim float32, row-major
//   4 output   labels x dim float32 (classifier only)
//   5 labels   per label: u32 byte length, bytes (classifier only)
//   6 metadata UTF-8 JSON (classifier only)
namespace augwork::textmodel {

enum class ModelKind { kEmbedding = 0, kClassifier = 1 };

std::string encode_embedding(const EmbeddingModel& model);
std::string encode_classifier(const ClassifierModel& model);
EmbeddingModel decode_embedding(const std::string& bytes);
ClassifierModel decode_classifier(const std::string& bytes);
ModelKind peek_kind(const std::string& bytes);

void save_embedding(const std::string& path, const EmbeddingModel& model);
void save_classifier(const std::string& path, const ClassifierModel& model);
// load_embedding also accepts a classifier file and returns its embedding.
EmbeddingModel load_embedding(const std::string& path);
ClassifierModel load_classifier(const std::string& path);

}  // namespace augwork::textmodel

#endif  // AUGWORK_MODEL_IO_H_
