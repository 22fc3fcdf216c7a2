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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "doctest.h"
#include "qedistill/rng.hpp"
#include "qedistill/trainer.hpp"

using namespace qed;

namespace {

ModelConfig small_model() {
  ModelConfig c;
  c.embedding_dim = 8;
  c.hidden_dim = 6;
  c.max_len = 8;
  return c;
}

TrainConfig fast_train(uint64_t seed) {
  TrainConfig tc;
  tc.batch_size = 8;
  tc.max_epochs = 30;
  tc.patience = 5;
  tc.seed = seed;
  tc.learning_rate = 0.01;
  return tc;
}

Example pair(const std::string& src, const std::string& mt, double label) {
  Example ex;
  ex.source = src;
  ex.mt = mt;
  ex.label = label;
  return ex;
}

Dataset token_dataset(int n, uint64_t seed,
                      const std::function<double(int)>& label_of) {
  Dataset ds;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    int a = static_cast<int>(rng.bounded(12));
    int b = static_cast<int>(rng.bounded(12));
    int c = static_cast<int>(rng.bounded(12));
    ds.examples.push_back(pair("w" + std::to_string(a) + " w" +
                                   std::to_string(b),
                               "v" + std::to_string(c) + " v" +
                                   std::to_string((a + i) % 12),
                               label_of(i)));
  }
  return ds;
}

}  // namespace

TEST_SUITE_BEGIN("trainer");

TEST_CASE("fits a constant label") {
  Dataset train_set = token_dataset(24, 1, [](int) { return 0.5; });
  Dataset val = token_dataset(8, 2, [](int) { return 0.5; });
  TrainConfig tc = fast_train(3);
  tc.metric = ValMetric::kMse;  // constant labels leave Pearson undefined
  Vocabulary vocab = Vocabulary::build(train_set);
  auto result = train(train_set, val, vocab, small_model(), tc);
  Dataset held = token_dataset(8, 9, [](int) { return 0.5; });
  for (double p : predict_dataset(result.model, held)) {
    CHECK(std::fabs(p - 0.5) < 0.05);
  }
}

TEST_CASE("patience one stops at the second epoch when nothing improves") {
  Dataset train_set = token_dataset(12, 4, [](int i) { return i % 2 ? 0.3 : 0.7; });
  Dataset val = token_dataset(6, 5, [](int i) { return i % 2 ? 0.3 : 0.7; });
  TrainConfig tc = fast_train(6);
  tc.patience = 1;
  tc.max_epochs = 50;
  tc.learning_rate = 0.0;  // frozen weights: the metric can never improve
  Vocabulary vocab = Vocabulary::build(train_set);
  auto result = train(train_set, val, vocab, small_model(), tc);
  CHECK(result.report.epochs.size() == 2);
  CHECK(result.report.stopped_early);
  CHECK(result.report.best_epoch <= 1);
}

TEST_CASE("same seed and data give bitwise-identical parameters") {
  Dataset train_set = token_dataset(20, 7, [](int i) { return 0.1 + 0.04 * (i % 20); });
  Dataset val = token_dataset(6, 8, [](int i) { return 0.2 + 0.1 * (i % 6); });
  TrainConfig tc = fast_train(11);
  tc.max_epochs = 4;
  Vocabulary vocab = Vocabulary::build(train_set);
  auto a = train(train_set, val, vocab, small_model(), tc);
  auto b = train(train_set, val, vocab, small_model(), tc);
  auto la = a.model.params.list(), lb = b.model.params.list();
  for (size_t i = 0; i < la.size(); ++i) CHECK(la[i]->v == lb[i]->v);
  CHECK(a.report.best_epoch == b.report.best_epoch);
}

TEST_CASE("memorizes a ten-example task") {
  Rng rng(31);
  Dataset train_set = token_dataset(10, 13, [&](int) {
    return 0.1 + 0.8 * rng.uniform01();
  });
  TrainConfig tc = fast_train(14);
  tc.batch_size = 5;
  tc.max_epochs = 200;
  tc.patience = 200;
  tc.learning_rate = 0.02;
  tc.metric = ValMetric::kMse;
  Vocabulary vocab = Vocabulary::build(train_set);
  auto result = train(train_set, train_set, vocab, small_model(), tc);
  double last_loss = result.report.epochs.back().train_loss;
  CHECK(last_loss < 1e-3);
  CHECK(result.report.epochs.size() <= 200);
}

TEST_CASE("early stopping returns the weights of the best epoch") {
  Dataset train_set = token_dataset(30, 17, [](int i) { return (i % 10) / 10.0; });
  Dataset val = token_dataset(10, 18, [](int i) { return (i % 10) / 10.0; });
  TrainConfig tc = fast_train(19);
  tc.max_epochs = 12;
  tc.patience = 3;
  Vocabulary vocab = Vocabulary::build(train_set);
  auto result = train(train_set, val, vocab, small_model(), tc);
  REQUIRE(result.report.best_epoch >= 1);
  std::optional<double> best;
  for (const auto& e : result.report.epochs) {
    if (e.val_metric && (!best || *e.val_metric > *best)) best = e.val_metric;
  }
  // Re-evaluating the returned weights reproduces the recorded best metric.
  auto eval = evaluate_epoch(result.model, val);
  REQUIRE(eval.pearson.has_value());
  REQUIRE(best.has_value());
  CHECK(*eval.pearson == doctest::Approx(*best).epsilon(1e-12));
  int best_epoch = result.report.best_epoch;
  CHECK(*result.report.epochs[best_epoch - 1].val_metric ==
        doctest::Approx(*best).epsilon(1e-12));
}

TEST_CASE("unlabeled examples are rejected") {
  Dataset train_set = token_dataset(6, 20, [](int) { return 0.4; });
  train_set.examples[3].label.reset();
  Dataset val = token_dataset(4, 21, [](int) { return 0.4; });
  Vocabulary vocab = Vocabulary::build(train_set);
  CHECK_THROWS_WITH_AS(
      train(train_set, val, vocab, small_model(), fast_train(1)),
      doctest::Contains("example 3"), ContractError);
}

TEST_CASE("evaluate_epoch on perfect and degenerate inputs") {
  Dataset train_set = token_dataset(10, 23, [](int i) { return 0.05 + 0.09 * i; });
  TrainConfig tc = fast_train(24);
  tc.max_epochs = 1;
  Vocabulary vocab = Vocabulary::build(train_set);
  auto result = train(train_set, train_set, vocab, small_model(), tc);

  SUBCASE("identity predictions give pearson 1 and zero error") {
    Dataset d = train_set;
    auto preds = predict_dataset(result.model, d);
    for (size_t i = 0; i < d.size(); ++i) d.examples[i].label = preds[i];
    auto rep = evaluate_epoch(result.model, d);
    REQUIRE(rep.pearson.has_value());
    CHECK(*rep.pearson == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.mse < 1e-18);
  }
  SUBCASE("size one is a metric error") {
    Dataset one;
    one.examples.push_back(train_set.examples[0]);
    CHECK_THROWS_AS(evaluate_epoch(result.model, one), MetricError);
  }
  SUBCASE("constant labels surface as an undefined flag") {
    Dataset d = train_set;
    for (auto& ex : d.examples) ex.label = 0.5;
    auto rep = evaluate_epoch(result.model, d);
    CHECK_FALSE(rep.pearson.has_value());
    CHECK(std::isfinite(rep.mae));
  }
}

TEST_CASE("train report csv lists one row per epoch") {
  Dataset train_set = token_dataset(8, 25, [](int i) { return 0.1 * (i % 8); });
  TrainConfig tc = fast_train(26);
  tc.max_epochs = 3;
  tc.patience = 3;
  Vocabulary vocab = Vocabulary::build(train_set);
  auto result = train(train_set, train_set, vocab, small_model(), tc);
  auto path = std::filesystem::temp_directory_path() / "qedistill_tests" /
              "train_report.csv";
  std::filesystem::create_directories(path.parent_path());
  write_train_report_csv(result.report, path.string());
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(result.report.epochs.size()) + 2);
}

TEST_SUITE_END();
