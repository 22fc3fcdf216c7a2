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

#ifndef QEDISTILL_SCENARIO_HPP_
#define QEDISTILL_SCENARIO_HPP_

#include <cstdint>

#include "qedistill/teacher.hpp"

namespace qed {

// Synthetic bilingual world with a known quality function. Source token i
// translates to target token i; machine translations corrupt a random
// fraction of tokens, so the planted overlap score spans [0, 1]. Gold and
// teacher labels are the planted score plus Gaussian noise of configurable
// width. The shifted pool draws tokens from an inverted frequency profile
// over the same inventory.
struct ScenarioConfig {
  int vocab_size = 400;
  int min_tokens = 4;
  int max_tokens = 12;
  size_t train_size = 5000;
  size_t val_size = 1000;
  size_t test_size = 1000;
  size_t pool_size = 20000;          // unlabeled, in-domain
  size_t shifted_pool_size = 8000;   // unlabeled, shifted domain
  double sigma_gold = 0.15;
  double sigma_teacher = 0.05;
  double sigma_teacher_shifted = 0.10;
  uint64_t master_seed = 1;

  void validate() const;
};

struct ScenarioData {
  OracleConfig oracle_clean;    // sigma 0: the planted function itself
  OracleConfig oracle_gold;     // sigma_gold
  OracleConfig oracle_teacher;  // sigma_teacher
  OracleConfig oracle_shifted;  // sigma_teacher_shifted
  Dataset train;                // gold-labeled
  Dataset val;                  // gold-labeled
  Dataset test;                 // gold-labeled
  Dataset pool;                 // unlabeled, in-domain
  Dataset shifted_pool;         // unlabeled, shifted token profile
  std::vector<double> test_truth;  // noiseless planted values for test
};

// All five sets are pairwise disjoint on (source, mt); byte-identical output
// for equal configs.
ScenarioData generate_scenario(const ScenarioConfig& config);

}  // namespace qed

#endif  // QEDISTILL_SCENARIO_HPP_
