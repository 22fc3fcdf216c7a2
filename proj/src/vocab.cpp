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

#include "qedistill/vocab.hpp"

#include <algorithm>
#include <fstream>

#include "qedistill/errors.hpp"

namespace qed {

Vocabulary Vocabulary::from_tokens(std::vector<std::string> ranked,
                                   int max_size) {
  if (max_size < 1) throw ConfigError("vocabulary max_size must be >= 1");
  Vocabulary v;
  v.max_size_ = max_size;
  v.tokens_.reserve(ranked.size() + 2);
  v.tokens_.push_back(kPadToken);
  v.tokens_.push_back(kUnkToken);
  for (auto& t : ranked) {
    if (static_cast<int>(v.tokens_.size()) >= max_size + 2) break;
    v.tokens_.push_back(std::move(t));
  }
  for (size_t i = 0; i < v.tokens_.size(); ++i) {
    v.id_.emplace(v.tokens_[i], static_cast<int>(i));
  }
  return v;
}

Vocabulary Vocabulary::build(std::span<const Dataset* const> corpus,
                             int max_size) {
  if (max_size < 1) throw ConfigError("build_vocab: max_size must be >= 1");
  std::unordered_map<std::string, int64_t> counts;
  for (const Dataset* ds : corpus) {
    for (const Example& ex : ds->examples) {
      for (auto& t : ex.source_tokens()) ++counts[t];
      for (auto& t : ex.mt_tokens()) ++counts[t];
    }
  }
  if (counts.empty()) {
    throw ContractError("build_vocab: empty corpus");
  }
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(),
                                                      counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(std::min<size_t>(ranked.size(), max_size));
  for (auto& [tok, cnt] : ranked) {
    if (static_cast<int>(tokens.size()) >= max_size) break;
    tokens.push_back(tok);
  }
  return from_tokens(std::move(tokens), max_size);
}

Vocabulary Vocabulary::build(const Dataset& corpus, int max_size) {
  const Dataset* one[] = {&corpus};
  return build(one, max_size);
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = id_.find(std::string(token));
  return it == id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) {
    throw IndexError("vocabulary: id " + std::to_string(id) +
                     " out of range for size " + std::to_string(size()));
  }
  return tokens_[id];
}

Encoded encode(const std::vector<std::string>& tokens,
               const Vocabulary& vocab, int max_len) {
  if (max_len < 1) throw ConfigError("encode: max_len must be >= 1");
  Encoded e;
  e.ids.assign(max_len, Vocabulary::kPad);
  e.mask.assign(max_len, 0);
  e.length = std::min<int>(max_len, static_cast<int>(tokens.size()));
  for (int i = 0; i < e.length; ++i) {
    e.ids[i] = vocab.id_of(tokens[i]);
    e.mask[i] = 1;
  }
  return e;
}

void save_vocab_text(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const auto& toks = vocab.tokens();
  for (size_t i = 2; i < toks.size(); ++i) out << toks[i] << '\n';
  if (!out) throw IoError("failed writing " + path);
}

Vocabulary load_vocab_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> ranked;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ranked.push_back(line);
  }
  int max_size = std::max<int>(1, static_cast<int>(ranked.size()));
  return Vocabulary::from_tokens(std::move(ranked), max_size);
}

}  // namespace qed
