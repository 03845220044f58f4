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

#include "augwork/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "augwork/error.h"

namespace augwork::textmodel {
namespace {

constexpr char kMagic[4] = {'A', 'W', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

enum Section : std::uint32_t {
  kHeader = 1,
  kVocab = 2,
  kInput = 3,
  kOutput = 4,
  kLabels = 5,
  kMetadata = 6,
};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) { out_.append(s); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  std::string& out() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view data, std::string what) : data_(data), what_(std::move(what)) {}

  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  std::uint64_t u64() { return uint(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string str() { return std::string(bytes(u32())); }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::kMalformedRecord, "truncated model " + what_ + " section");
    }
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  std::string what_;
};

struct Header {
  ModelKind kind = ModelKind::kEmbedding;
  std::uint64_t dim = 0;
  std::uint64_t buckets = 0;
  std::int32_t minn = 3;
  std::int32_t maxn = 6;
  std::uint64_t word_ngrams = 0;
  std::uint64_t words = 0;
  std::uint64_t labels = 0;
};

std::string encode(const Header& h, const EmbeddingModel& emb, const ClassifierModel* clf) {
  std::map<std::uint32_t, std::string> sections;
  {
    Writer w;
    w.u32(static_cast<std::uint32_t>(h.kind));
    w.u64(h.dim);
    w.u64(h.buckets);
    w.i32(h.minn);
    w.i32(h.maxn);
    w.u64(h.word_ngrams);
    w.u64(h.words);
    w.u64(h.labels);
    sections[kHeader] = std::move(w.out());
  }
  {
    Writer w;
    for (const auto& word : emb.words()) w.str(word);
    sections[kVocab] = std::move(w.out());
  }
  {
    Writer w;
    w.out().reserve(emb.input().data().size() * 4);
    for (float v : emb.input().data()) w.f32(v);
    sections[kInput] = std::move(w.out());
  }
  if (clf) {
    Writer out, labels;
    for (float v : clf->output().data()) out.f32(v);
    for (const auto& l : clf->labels()) labels.str(l);
    sections[kOutput] = std::move(out.out());
    sections[kLabels] = std::move(labels.out());
    sections[kMetadata] = clf->metadata().dump();
  }

  Writer file;
  file.bytes(std::string_view(kMagic, 4));
  file.u32(kVersion);
  file.u32(static_cast<std::uint32_t>(sections.size()));
  std::uint64_t offset = 4 + 4 + 4 + sections.size() * (4 + 8 + 8);
  for (const auto& [id, payload] : sections) {
    file.u32(id);
    file.u64(offset);
    file.u64(payload.size());
    offset += payload.size();
  }
  for (const auto& [id, payload] : sections) file.bytes(payload);
  return std::move(file.out());
}

std::map<std::uint32_t, std::string_view> split_sections(const std::string& bytes) {
  Reader r(bytes, "container");
  if (r.bytes(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorCode::kMalformedRecord, "not an AWB1 model file");
  }
  const auto version = r.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kMalformedRecord, "unsupported model version " + std::to_string(version));
  }
  const auto count = r.u32();
  std::map<std::uint32_t, std::string_view> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto id = r.u32();
    const auto offset = r.u64();
    const auto length = r.u64();
    if (offset > bytes.size() || length > bytes.size() - offset) {
      throw Error(ErrorCode::kMalformedRecord, "model section out of bounds");
    }
    out[id] = std::string_view(bytes).substr(offset, length);
  }
  return out;
}

std::string_view section(const std::map<std::uint32_t, std::string_view>& s, std::uint32_t id) {
  auto it = s.find(id);
  if (it == s.end()) {
    throw Error(ErrorCode::kMalformedRecord, "model file lacks section " + std::to_string(id));
  }
  return it->second;
}

Header read_header(const std::map<std::uint32_t, std::string_view>& s) {
  Reader r(section(s, kHeader), "header");
  Header h;
  const auto kind = r.u32();
  if (kind > 1) throw Error(ErrorCode::kMalformedRecord, "unknown model kind");
  h.kind = static_cast<ModelKind>(kind);
  h.dim = r.u64();
  h.buckets = r.u64();
  h.minn = r.i32();
  h.maxn = r.i32();
  h.word_ngrams = r.u64();
  h.words = r.u64();
  h.labels = r.u64();
  return h;
}

void read_floats(std::string_view payload, std::vector<float>& dst, const char* what) {
  if (payload.size() != dst.size() * 4) {
    throw Error(ErrorCode::kMalformedRecord, std::string("model ") + what + " size mismatch");
  }
  Reader r(payload, what);
  for (auto& v : dst) v = r.f32();
}

EmbeddingModel read_embedding(const std::map<std::uint32_t, std::string_view>& s, const Header& h) {
  Reader vr(section(s, kVocab), "vocab");
  std::vector<std::string> words;
  words.reserve(h.words);
  for (std::uint64_t i = 0; i < h.words; ++i) words.push_back(vr.str());
  if (!vr.done()) throw Error(ErrorCode::kMalformedRecord, "trailing bytes in vocab section");
  EmbeddingModel emb(std::move(words), h.dim, h.buckets, h.minn, h.maxn);
  read_floats(section(s, kInput), emb.input().data(), "input");
  return emb;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write model file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to model file: " + path);
}

}  // namespace

std::string encode_embedding(const EmbeddingModel& model) {
  Header h;
  h.kind = ModelKind::kEmbedding;
  h.dim = model.dim();
  h.buckets = model.bucket_count();
  h.minn = model.minn();
  h.maxn = model.maxn();
  h.words = model.words().size();
  return encode(h, model, nullptr);
}

std::string encode_classifier(const ClassifierModel& model) {
  const EmbeddingModel emb = model.embedding();
  Header h;
  h.kind = ModelKind::kClassifier;
  h.dim = emb.dim();
  h.buckets = emb.bucket_count();
  h.minn = emb.minn();
  h.maxn = emb.maxn();
  h.word_ngrams = model.word_ngrams();
  h.words = emb.words().size();
  h.labels = model.labels().size();
  return encode(h, emb, &model);
}

ModelKind peek_kind(const std::string& bytes) { return read_header(split_sections(bytes)).kind; }

EmbeddingModel decode_embedding(const std::string& bytes) {
  const auto s = split_sections(bytes);
  return read_embedding(s, read_header(s));
}

ClassifierModel decode_classifier(const std::string& bytes) {
  const auto s = split_sections(bytes);
  const Header h = read_header(s);
  if (h.kind != ModelKind::kClassifier) {
    throw Error(ErrorCode::kInvalidInput, "model file holds an embedding, not a classifier");
  }
  Reader lr(section(s, kLabels), "labels");
  std::vector<std::string> labels;
  for (std::uint64_t i = 0; i < h.labels; ++i) labels.push_back(lr.str());
  ClassifierModel model(std::make_shared<const EmbeddingModel>(read_embedding(s, h)),
                        std::move(labels), h.word_ngrams);
  read_floats(section(s, kOutput), model.output().data(), "output");
  const auto meta = section(s, kMetadata);
  try {
    model.metadata() = nlohmann::json::parse(meta);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("model metadata: ") + e.what());
  }
  return model;
}

void save_embedding(const std::string& path, const EmbeddingModel& model) {
  write_file(path, encode_embedding(model));
}

void save_classifier(const std::string& path, const ClassifierModel& model) {
  write_file(path, encode_classifier(model));
}

EmbeddingModel load_embedding(const std::string& path) { return decode_embedding(read_file(path)); }

ClassifierModel load_classifier(const std::string& path) {
  return decode_classifier(read_file(path));
}

}  // namespace augwork::textmodel
