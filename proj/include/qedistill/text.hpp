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

#ifndef QEDISTILL_TEXT_HPP_
#define QEDISTILL_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace qed {

// Lowercases (ASCII letters only), splits on whitespace, and detaches ASCII
// punctuation into single-character tokens. Bytes >= 0x80 are treated as
// word characters, so multi-byte UTF-8 sequences stay intact.
std::vector<std::string> tokenize(std::string_view text);

std::string lowercase_ascii(std::string_view text);
std::string_view trim(std::string_view text);

// Joins tokens with single spaces; the inverse of tokenize on its output.
std::string join_tokens(const std::vector<std::string>& tokens);

// Number of UTF-8 code points (continuation bytes are not counted).
size_t utf8_length(std::string_view text);

}  // namespace qed

#endif  // QEDISTILL_TEXT_HPP_
