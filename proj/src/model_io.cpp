// Copyright 2026 The qedistill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qedistill/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "qedistill/errors.hpp"

namespace qed {

static_assert(std::endian::native == std::endian::little,
              "container writes little-endian words directly");

Encoded Model::encode_source(const std::string& text) const {
  return encode(tokenize(text), src_vocab, config.max_len);
}
Encoded Model::encode_mt(const std::string& text) const {
  return encode(tokenize(text), mt_vocab, config.max_len);
}
double Model::predict_pair(const std::string& source,
                           const std::string& mt) const {
  return predict(config, params, encode_source(source), encode_mt(mt));
}

namespace {

constexpr char kMagic[4] = {'B', 'Q', 'E', '1'};
constexpr uint8_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path);
  }
  void bytes(const void* p, size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u8(uint8_t x) { bytes(&x, 1); }
  void u32(uint32_t x) { bytes(&x, 4); }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void doubles(const std::vector<double>& v) {
    bytes(v.data(), v.size() * sizeof(double));
  }
  void close(const std::string& path) {
    out_.flush();
    if (!out_) throw IoError("failed writing " + path);
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
  }
  void bytes(void* p, size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) {
      throw FormatError(path_ + ": truncated at byte offset " +
                        std::to_string(offset_ + in_.gcount()));
    }
    offset_ += n;
  }
  uint8_t u8() { uint8_t x; bytes(&x, 1); return x; }
  uint32_t u32() { uint32_t x; bytes(&x, 4); return x; }
  std::string str(uint32_t max_len = 1u << 20) {
    uint32_t n = u32();
    if (n > max_len) {
      throw FormatError(path_ + ": string length " + std::to_string(n) +
                        " at byte offset " + std::to_string(offset_ - 4) +
                        " is implausible");
    }
    std::string s(n, '\0');
    if (n) bytes(s.data(), n);
    return s;
  }
  void doubles(std::vector<double>& v) {
    bytes(v.data(), v.size() * sizeof(double));
  }
  void expect_eof() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw FormatError(path_ + ": trailing bytes at offset " +
                        std::to_string(offset_));
    }
  }
  size_t offset() const { return offset_; }

 private:
  std::string path_;
  std::ifstream in_;
  size_t offset_ = 0;
};

void write_vocab(Writer& w, const Vocabulary& v) {
  w.u32(static_cast<uint32_t>(v.max_size()));
  const auto& toks = v.tokens();
  w.u32(static_cast<uint32_t>(toks.size() - 2));
  for (size_t i = 2; i < toks.size(); ++i) w.str(toks[i]);
}

Vocabulary read_vocab(Reader& r) {
  uint32_t max_size = r.u32();
  uint32_t n = r.u32();
  std::vector<std::string> ranked;
  ranked.reserve(n);
  for (uint32_t i = 0; i < n; ++i) ranked.push_back(r.str());
  return Vocabulary::from_tokens(std::move(ranked),
                                 static_cast<int>(max_size));
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
  ModelConfig c = model.config.resolved();
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u8(kVersion);
  w.u32(static_cast<uint32_t>(c.vocab_size));
  w.u32(static_cast<uint32_t>(c.embedding_dim));
  w.u32(static_cast<uint32_t>(c.hidden_dim));
  w.u32(static_cast<uint32_t>(c.max_len));
  w.u32(static_cast<uint32_t>(c.attention_dim));
  write_vocab(w, model.src_vocab);
  write_vocab(w, model.mt_vocab);
  auto arrays = model.params.list();
  w.u32(static_cast<uint32_t>(arrays.size()));
  for (const Tensor* t : arrays) {
    w.u32(static_cast<uint32_t>(t->rows()));
    w.u32(static_cast<uint32_t>(t->cols()));
    w.doubles(t->v);
  }
  w.close(path);
}

Model load_model(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path + ": bad magic, not a model container");
  }
  uint8_t version = r.u8();
  if (version != kVersion) {
    throw FormatError(path + ": unsupported container version " +
                      std::to_string(version));
  }
  Model m;
  m.config.vocab_size = static_cast<int>(r.u32());
  m.config.embedding_dim = static_cast<int>(r.u32());
  m.config.hidden_dim = static_cast<int>(r.u32());
  m.config.max_len = static_cast<int>(r.u32());
  m.config.attention_dim = static_cast<int>(r.u32());
  m.config.validate();
  m.src_vocab = read_vocab(r);
  m.mt_vocab = read_vocab(r);
  // Sizes the arrays, then overwrites them from the file.
  m.params = init_params(m.config, 0);
  auto arrays = m.params.list();
  uint32_t n_arrays = r.u32();
  if (n_arrays != arrays.size()) {
    throw FormatError(path + ": expected " + std::to_string(arrays.size()) +
                      " parameter arrays, found " + std::to_string(n_arrays));
  }
  for (Tensor* t : arrays) {
    uint32_t rows = r.u32();
    uint32_t cols = r.u32();
    if (rows != static_cast<uint32_t>(t->rows()) ||
        cols != static_cast<uint32_t>(t->cols())) {
      throw FormatError(path + ": parameter array shape " +
                        std::to_string(rows) + "x" + std::to_string(cols) +
                        " does not match config near byte offset " +
                        std::to_string(r.offset()));
    }
    r.doubles(t->v);
  }
  r.expect_eof();
  return m;
}

}  // namespace qed
