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

#include "qedistill/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qedistill/adam.hpp"
#include "qedistill/parallel.hpp"
#include "qedistill/rng.hpp"
#include "qedistill/tape.hpp"

namespace qed {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (patience < 1) throw ConfigError("train: patience must be >= 1");
  if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
}

namespace {

struct Prepared {
  std::vector<Encoded> src;
  std::vector<Encoded> mt;
  std::vector<double> labels;
};

Prepared prepare(const Dataset& data, const Vocabulary& vocab, int max_len,
                 const char* what) {
  Prepared p;
  p.src.reserve(data.size());
  p.mt.reserve(data.size());
  p.labels.reserve(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const Example& ex = data.examples[i];
    if (!ex.label) {
      throw ContractError(std::string(what) + ": example " +
                          std::to_string(i) + " has no label");
    }
    Encoded s = encode(ex.source_tokens(), vocab, max_len);
    Encoded m = encode(ex.mt_tokens(), vocab, max_len);
    if (s.length == 0 || m.length == 0) {
      throw ContractError(std::string(what) + ": example " +
                          std::to_string(i) + " has an empty sentence");
    }
    p.src.push_back(std::move(s));
    p.mt.push_back(std::move(m));
    p.labels.push_back(*ex.label);
  }
  return p;
}

std::vector<double> predict_prepared(const ModelConfig& config,
                                     const ModelParams& params,
                                     const Prepared& data) {
  std::vector<double> preds(data.labels.size());
  parallel_for(static_cast<int64_t>(preds.size()), [&](int64_t i) {
    preds[i] = predict(config, params, data.src[i], data.mt[i]);
  });
  return preds;
}

std::optional<double> metric_of(ValMetric metric,
                                std::span<const double> preds,
                                std::span<const double> labels) {
  if (metric == ValMetric::kPearson) return pearson(preds, labels);
  double se = 0.0;
  for (size_t i = 0; i < preds.size(); ++i) {
    double d = preds[i] - labels[i];
    se += d * d;
  }
  return se / static_cast<double>(preds.size());
}

bool improves(ValMetric metric, std::optional<double> candidate,
              std::optional<double> best) {
  if (!candidate) return false;
  if (!best) return true;
  return metric == ValMetric::kPearson ? *candidate > *best
                                       : *candidate < *best;
}

}  // namespace

TrainResult train(const Dataset& train_data, const Dataset& validation,
                  const Vocabulary& vocab, const ModelConfig& model_config,
                  const TrainConfig& config) {
  config.validate();
  ModelConfig mc = model_config.resolved();
  mc.vocab_size = vocab.size();
  mc.validate();
  if (train_data.empty()) throw ContractError("train: empty training set");
  if (validation.empty()) throw ContractError("train: empty validation set");

  auto t0 = std::chrono::steady_clock::now();
  Prepared tr = prepare(train_data, vocab, mc.max_len, "train");
  Prepared va = prepare(validation, vocab, mc.max_len, "validation");

  ModelParams params = init_params(mc, config.seed);
  auto param_ptrs = params.list();
  AdamState adam = AdamState::init(
      std::vector<const Tensor*>(param_ptrs.begin(), param_ptrs.end()),
      config.learning_rate, config.beta1, config.beta2, config.epsilon);

  Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<size_t> order(tr.labels.size());
  std::iota(order.begin(), order.end(), size_t{0});

  TrainReport report;
  ModelParams best_params = params;
  std::optional<double> best_metric;
  int no_improvement = 0;
  Tape tape;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    size_t batch_index = 0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size), ++batch_index) {
      size_t end = std::min(order.size(),
                            start + static_cast<size_t>(config.batch_size));
      tape.reset();
      BoundModel bound = bind_model(tape, mc, params);
      std::vector<int> losses;
      losses.reserve(end - start);
      for (size_t k = start; k < end; ++k) {
        size_t i = order[k];
        int pred = build_prediction(tape, bound, tr.src[i], tr.mt[i]);
        int label = tape.leaf(Tensor::scalar(tr.labels[i]));
        losses.push_back(tape.mse(pred, label));
      }
      int batch_loss = tape.reduce_mean(tape.concat(losses, false));
      double loss_value = tape.value(batch_loss).v[0];
      if (!std::isfinite(loss_value)) {
        throw NumericError("train: non-finite loss at epoch " +
                           std::to_string(epoch) + " batch " +
                           std::to_string(batch_index));
      }
      loss_sum += loss_value * static_cast<double>(end - start);
      tape.backward(batch_loss);
      auto grads = tape.param_gradients();
      std::vector<const Tensor*> grad_ptrs;
      grad_ptrs.reserve(grads.size());
      for (const auto& g : grads) grad_ptrs.push_back(g.grad);
      adam_step(param_ptrs, grad_ptrs, adam);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    auto preds = predict_prepared(mc, params, va);
    stats.val_metric = metric_of(config.metric, preds, va.labels);
    report.epochs.push_back(stats);

    if (improves(config.metric, stats.val_metric, best_metric)) {
      best_metric = stats.val_metric;
      best_params = params;
      report.best_epoch = epoch;
      no_improvement = 0;
    } else {
      ++no_improvement;
      if (no_improvement >= config.patience) {
        report.stopped_early = true;
        break;
      }
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  TrainResult result;
  result.model.config = mc;
  result.model.src_vocab = vocab;
  result.model.mt_vocab = vocab;
  result.model.params = std::move(best_params);
  result.report = std::move(report);
  return result;
}

std::vector<double> predict_dataset(const Model& model, const Dataset& data) {
  std::vector<double> preds(data.size());
  parallel_for(static_cast<int64_t>(data.size()), [&](int64_t i) {
    const Example& ex = data.examples[i];
    preds[i] = predict(model.config, model.params,
                       encode(ex.source_tokens(), model.src_vocab,
                              model.config.max_len),
                       encode(ex.mt_tokens(), model.mt_vocab,
                              model.config.max_len));
  });
  return preds;
}

EvalReport evaluate_epoch(const Model& model, const Dataset& dataset) {
  if (dataset.size() < 2) {
    throw MetricError("evaluate: needs at least 2 examples, got " +
                      std::to_string(dataset.size()));
  }
  std::vector<double> labels;
  labels.reserve(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    const Example& ex = dataset.examples[i];
    if (!ex.label) {
      throw ContractError("evaluate: example " + std::to_string(i) +
                          " has no label");
    }
    labels.push_back(*ex.label);
  }
  auto preds = predict_dataset(model, dataset);
  return evaluate_predictions(preds, labels);
}

void write_train_report_csv(const TrainReport& report,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "epoch,train_loss,val_metric\n";
  for (const EpochStats& e : report.epochs) {
    out << e.epoch << ',' << format_double(e.train_loss) << ',';
    out << (e.val_metric ? format_double(*e.val_metric) : "undefined");
    out << "\n";
  }
  out << "# best_epoch=" << report.best_epoch
      << " stopped_early=" << (report.stopped_early ? 1 : 0)
      << " wall_seconds=" << format_double(report.wall_seconds) << "\n";
}

}  // namespace qed
