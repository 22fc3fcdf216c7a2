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

#include "qedistill/sweep.hpp"

#include <cmath>
#include <fstream>

#include "qedistill/dataset.hpp"
#include "qedistill/parallel.hpp"

namespace qed {

std::vector<SweepRow> sweep(const std::vector<Dataset>& subsets,
                            const Dataset& validation, const Dataset& test,
                            const std::vector<double>* test_truth,
                            const ModelConfig& model_config,
                            const TrainConfig& train_config, int repeats,
                            uint64_t base_seed) {
  if (repeats < 1) throw ConfigError("sweep: repeats must be >= 1");
  if (test_truth && test_truth->size() != test.size()) {
    throw ContractError("sweep: test_truth length does not match test set");
  }
  std::vector<double> reference;
  if (test_truth) {
    reference = *test_truth;
  } else {
    for (size_t i = 0; i < test.size(); ++i) {
      const auto& label = test.examples[i].label;
      if (!label) throw ContractError("sweep: unlabeled test example");
      reference.push_back(*label);
    }
  }

  struct Task {
    size_t subset;
    int repeat;
  };
  std::vector<Task> tasks;
  for (size_t s = 0; s < subsets.size(); ++s) {
    for (int r = 0; r < repeats; ++r) tasks.push_back({s, r});
  }
  std::vector<std::optional<double>> results(tasks.size());

  // Independent trainings; safe to fan out one per thread.
  parallel_for(static_cast<int64_t>(tasks.size()), [&](int64_t ti) {
    const Task& task = tasks[ti];
    TrainConfig tc = train_config;
    tc.seed = base_seed + static_cast<uint64_t>(task.repeat);
    Vocabulary vocab = Vocabulary::build(subsets[task.subset]);
    TrainResult trained = train(subsets[task.subset], validation, vocab,
                                model_config, tc);
    auto preds = predict_dataset(trained.model, test);
    results[ti] = pearson(preds, reference);
  });

  std::vector<SweepRow> rows;
  rows.reserve(subsets.size());
  for (size_t s = 0; s < subsets.size(); ++s) {
    SweepRow row;
    row.size = subsets[s].size();
    double sum = 0.0;
    int defined = 0;
    for (int r = 0; r < repeats; ++r) {
      auto value = results[s * static_cast<size_t>(repeats) + r];
      row.per_seed.push_back(value);
      if (value) {
        sum += *value;
        ++defined;
      }
    }
    if (defined > 0) {
      row.mean_pearson = sum / defined;
      for (const auto& value : row.per_seed) {
        if (value) {
          row.max_abs_dev = std::max(row.max_abs_dev,
                                     std::fabs(*value - *row.mean_pearson));
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  // max_abs_dev is the spread over seeds (max deviation from the mean), not
  // a parametric confidence interval.
  out << "size,mean_pearson,max_abs_dev,per_seed\n";
  for (const SweepRow& r : rows) {
    out << r.size << ',';
    out << (r.mean_pearson ? format_double(*r.mean_pearson) : "undefined");
    out << ',' << format_double(r.max_abs_dev) << ',';
    for (size_t i = 0; i < r.per_seed.size(); ++i) {
      if (i) out << ';';
      out << (r.per_seed[i] ? format_double(*r.per_seed[i]) : "undefined");
    }
    out << "\n";
  }
}

}  // namespace qed
