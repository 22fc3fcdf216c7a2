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

#ifndef QEDISTILL_TRAINER_HPP_
#define QEDISTILL_TRAINER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qedistill/dataset.hpp"
#include "qedistill/metrics.hpp"
#include "qedistill/model_io.hpp"

namespace qed {

enum class ValMetric : uint8_t { kPearson, kMse };

struct TrainConfig {
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 5;
  uint64_t seed = 0;
  ValMetric metric = ValMetric::kPearson;
  // Optimizer settings for the student; the published recipe leaves them
  // open, so these defaults are ours.
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> val_metric;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;  // 1-based; 0 means the metric never became defined
  bool stopped_early = false;
  double wall_seconds = 0.0;
};

struct TrainResult {
  Model model;  // weights restored from the best epoch
  TrainReport report;
};

// Mini-batch MSE training with a per-epoch seeded shuffle and early stopping
// once the validation metric fails to improve for `patience` consecutive
// epochs. Both vocabularies of the returned model are `vocab`.
TrainResult train(const Dataset& train_data, const Dataset& validation,
                  const Vocabulary& vocab, const ModelConfig& model_config,
                  const TrainConfig& config);

// Pearson/MSE/MAE of model predictions over a labeled dataset, in file
// order.
EvalReport evaluate_epoch(const Model& model, const Dataset& dataset);

// Predictions for every example, file order. Parallel-mapped when the
// process thread count allows; results are identical either way.
std::vector<double> predict_dataset(const Model& model, const Dataset& data);

void write_train_report_csv(const TrainReport& report,
                            const std::string& path);

}  // namespace qed

#endif  // QEDISTILL_TRAINER_HPP_
