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

#ifndef QEDISTILL_SWEEP_HPP_
#define QEDISTILL_SWEEP_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qedistill/trainer.hpp"

namespace qed {

struct SweepRow {
  size_t size = 0;
  std::optional<double> mean_pearson;
  double max_abs_dev = 0.0;  // max |r_i - mean| over seeds; a range, not a CI
  std::vector<std::optional<double>> per_seed;
};

// Trains `repeats` students per subset (seeds base_seed + r, shared across
// sizes so comparisons are seed-paired) and reports test Pearson. When
// test_truth is given it replaces the test labels as the reference.
std::vector<SweepRow> sweep(const std::vector<Dataset>& subsets,
                            const Dataset& validation, const Dataset& test,
                            const std::vector<double>* test_truth,
                            const ModelConfig& model_config,
                            const TrainConfig& train_config, int repeats,
                            uint64_t base_seed);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

}  // namespace qed

#endif  // QEDISTILL_SWEEP_HPP_
