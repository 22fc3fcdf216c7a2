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

#ifndef QEDISTILL_DATASET_HPP_
#define QEDISTILL_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qedistill/text.hpp"

namespace qed {

enum class Origin : uint8_t { kGold, kDistilled, kAugmented };
const char* origin_name(Origin o);

// One source/translation pair. Labels live on the normalized [0, 1] scale;
// files carry the raw 0-100 scale.
struct Example {
  std::string source;
  std::string mt;
  std::optional<double> label;     // in [0, 1]
  std::optional<double> variance;  // >= 0, ensemble prediction variance
  Origin origin = Origin::kGold;

  std::vector<std::string> source_tokens() const { return tokenize(source); }
  std::vector<std::string> mt_tokens() const { return tokenize(mt); }
};

struct Dataset {
  std::vector<Example> examples;
  std::string name;
  std::string domain;
  std::string provenance;

  size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

// raw is on the 0-100 scale; line (when >= 1) is included in the error.
double normalize_score(double raw, long line = 0);
double denormalize_score(double normalized);

struct TsvOptions {
  bool has_header = false;
};

// Tab-separated: source TAB mt [TAB score [TAB variance]]. Scores on the
// 0-100 scale. Lines with fewer than 2 or more than 4 columns fail with the
// line number.
Dataset read_pairs(const std::string& path, TsvOptions options = {});
void write_pairs(const Dataset& dataset, const std::string& path);

// Shortest round-trip decimal form (used by all data files, so reruns are
// byte-identical and parsing recovers the exact double).
std::string format_double(double x);

}  // namespace qed

#endif  // QEDISTILL_DATASET_HPP_
