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

#ifndef QEDISTILL_VOCAB_HPP_
#define QEDISTILL_VOCAB_HPP_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qedistill/dataset.hpp"

namespace qed {

// Frequency-ranked token ids. Rank order is descending count with ties
// broken lexicographically, so builds are identical across platforms.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocabulary() = default;

  // Builds over the union of source and MT tokens of the given datasets,
  // keeping at most max_size tokens plus the two specials.
  static Vocabulary build(std::span<const Dataset* const> corpus,
                          int max_size = 30000);
  static Vocabulary build(const Dataset& corpus, int max_size = 30000);

  // From a rank-ordered token list (specials excluded).
  static Vocabulary from_tokens(std::vector<std::string> ranked,
                                int max_size);

  int id_of(std::string_view token) const;
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  int max_size() const { return max_size_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& o) const {
    return tokens_ == o.tokens_ && max_size_ == o.max_size_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> id_;
  int max_size_ = 30000;
};

struct Encoded {
  std::vector<int> ids;        // length max_len, PAD-filled
  std::vector<uint8_t> mask;   // 1 on real tokens
  int length = 0;              // number of real (unpadded) positions
};

// UNK for out-of-vocabulary tokens, truncation past max_len, PAD fill.
Encoded encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
               int max_len);

// One token per line, rank order, specials implied.
void save_vocab_text(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab_text(const std::string& path);

}  // namespace qed

#endif  // QEDISTILL_VOCAB_HPP_
