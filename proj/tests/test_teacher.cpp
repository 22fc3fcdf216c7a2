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

#include "doctest.h"
#include "qedistill/rng.hpp"
#include "qedistill/teacher.hpp"

using namespace qed;

namespace {

// Independent two-pass population variance used as the oracle.
std::pair<double, double> two_pass_mean_var(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, var};
}

Example pair_of(const std::string& src, const std::string& mt) {
  Example ex;
  ex.source = src;
  ex.mt = mt;
  return ex;
}

ModelConfig tiny_model() {
  ModelConfig c;
  c.embedding_dim = 6;
  c.hidden_dim = 4;
  c.max_len = 6;
  return c;
}

TrainConfig tiny_train(uint64_t seed) {
  TrainConfig tc;
  tc.batch_size = 8;
  tc.max_epochs = 2;
  tc.patience = 2;
  tc.seed = seed;
  return tc;
}

Dataset tiny_dataset(int n, uint64_t seed) {
  Dataset ds;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    Example ex = pair_of("a" + std::to_string(rng.bounded(9)) + " b" +
                             std::to_string(rng.bounded(9)),
                         "c" + std::to_string(rng.bounded(9)));
    ex.label = 0.1 + 0.8 * rng.uniform01();
    ds.examples.push_back(ex);
  }
  return ds;
}

}  // namespace

TEST_SUITE_BEGIN("teacher");

TEST_CASE("planted quality is perfect overlap under the identity map") {
  OracleConfig oc;  // identity map, no noise
  CHECK(synthetic_quality({"x", "y", "z"}, {"x", "y", "z"}, oc) == 1.0);
  CHECK(synthetic_quality({"x", "y"}, {"p", "q"}, oc) == 0.0);
}

TEST_CASE("planted quality respects the bilingual map") {
  OracleConfig oc;
  oc.token_map = {{"hund", "dog"}, {"katze", "cat"}};
  CHECK(synthetic_quality({"hund", "katze"}, {"dog", "cat"}, oc) == 1.0);
  // One of two tokens right: precision 1/2, recall 1/2.
  CHECK(synthetic_quality({"hund", "katze"}, {"dog", "bird"}, oc) ==
        doctest::Approx(0.5));
}

TEST_CASE("oracle noise has the configured spread") {
  OracleConfig clean;
  clean.sigma = 0.0;
  Rng rng(77);
  for (double sigma : {0.05, 0.15}) {
    OracleConfig noisy;
    noisy.sigma = sigma;
    noisy.seed = 123;
    double sq = 0.0;
    int kept = 0;
    for (int i = 0; i < 10000; ++i) {
      // Mid-range planted values so the [0,1] clamp rarely bites.
      std::vector<std::string> src = {"a" + std::to_string(i), "b", "c", "d"};
      std::vector<std::string> mt = {"a" + std::to_string(i), "b",
                                     "x" + std::to_string(rng.bounded(50)),
                                     "y"};
      double base = synthetic_quality(src, mt, clean);
      double noisy_v = synthetic_quality(src, mt, noisy);
      sq += (noisy_v - base) * (noisy_v - base);
      ++kept;
    }
    double measured = std::sqrt(sq / kept);
    CHECK(measured > sigma * 0.8);
    CHECK(measured < sigma * 1.2);
  }
}

TEST_CASE("oracle output depends on content, not call order") {
  OracleConfig oc;
  oc.sigma = 0.1;
  oc.seed = 99;
  double first = synthetic_quality({"m", "n"}, {"m", "o"}, oc);
  synthetic_quality({"other"}, {"pair"}, oc);
  double second = synthetic_quality({"m", "n"}, {"m", "o"}, oc);
  CHECK(first == second);
}

TEST_CASE("ensemble prediction matches hand arithmetic") {
  // Members 0.2, 0.4, 0.6: deviations -0.2, 0, 0.2 around mean 0.4, so the
  // population variance is 0.08 / 3.
  std::vector<double> members = {0.2, 0.4, 0.6};
  auto [mean, var] = two_pass_mean_var(members);
  CHECK(mean == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(var == doctest::Approx(0.0266667).epsilon(1e-4));
}

TEST_CASE("ensemble predict agrees with the two-pass oracle") {
  Dataset train_set = tiny_dataset(12, 1);
  Dataset val = tiny_dataset(6, 2);
  Vocabulary vocab = Vocabulary::build(train_set);
  auto members = train_ensemble(train_set, val, vocab, 3, 50, tiny_model(),
                                tiny_train(0));
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Example ex = pair_of("a" + std::to_string(rng.bounded(9)),
                         "c" + std::to_string(rng.bounded(9)));
    auto p = ensemble_predict(members, ex);
    auto [mean, var] = two_pass_mean_var(p.member_values);
    CHECK(std::fabs(p.mean - mean) < 1e-12);
    CHECK(std::fabs(p.variance - var) < 1e-12);
    CHECK(p.mean >= *std::min_element(p.member_values.begin(),
                                      p.member_values.end()));
    CHECK(p.mean <= *std::max_element(p.member_values.begin(),
                                      p.member_values.end()));
  }
}

TEST_CASE("identical members have zero variance") {
  Dataset train_set = tiny_dataset(10, 3);
  Dataset val = tiny_dataset(4, 4);
  Vocabulary vocab = Vocabulary::build(train_set);
  TrainConfig tc = tiny_train(7);
  auto one = train(train_set, val, vocab, tiny_model(), tc).model;
  std::vector<Model> twins = {one, one};
  auto p = ensemble_predict(twins, train_set.examples[0]);
  CHECK(p.variance == 0.0);
}

TEST_CASE("train_ensemble determinism and arity checks") {
  Dataset train_set = tiny_dataset(10, 5);
  Dataset val = tiny_dataset(4, 6);
  Vocabulary vocab = Vocabulary::build(train_set);
  CHECK_THROWS_AS(train_ensemble(train_set, val, vocab, 1, 9, tiny_model(),
                                 tiny_train(0)),
                  ConfigError);
  auto a = train_ensemble(train_set, val, vocab, 2, 9, tiny_model(),
                          tiny_train(0));
  auto b = train_ensemble(train_set, val, vocab, 2, 9, tiny_model(),
                          tiny_train(0));
  for (int k = 0; k < 2; ++k) {
    auto la = a[k].params.list(), lb = b[k].params.list();
    for (size_t i = 0; i < la.size(); ++i) CHECK(la[i]->v == lb[i]->v);
  }
  auto five = train_ensemble(train_set, val, vocab, 5, 9, tiny_model(),
                             tiny_train(0));
  CHECK(five.size() == 5);
}

TEST_CASE("mismatched vocabularies are rejected") {
  Dataset train_a = tiny_dataset(10, 7);
  Dataset train_b = tiny_dataset(10, 8);
  Dataset val = tiny_dataset(4, 9);
  auto m1 = train(train_a, val, Vocabulary::build(train_a), tiny_model(),
                  tiny_train(1))
                .model;
  auto m2 = train(train_b, val, Vocabulary::build(train_b), tiny_model(),
                  tiny_train(2))
                .model;
  std::vector<Model> mixed = {m1, m2};
  CHECK_THROWS_AS(ensemble_predict(mixed, train_a.examples[0]),
                  ContractError);
}

TEST_CASE("label_dataset maps teachers over pools") {
  OracleConfig oc;
  oc.sigma = 0.02;
  oc.seed = 4;
  auto teacher = make_synthetic_teacher(oc);

  Dataset empty;
  CHECK(label_dataset(empty, *teacher).empty());

  Dataset pool;
  pool.examples = {pair_of("a b", "a b"), pair_of("c d", "x y"),
                   pair_of("e", "e f")};
  Dataset labeled = label_dataset(pool, *teacher);
  REQUIRE(labeled.size() == 3);
  for (const auto& ex : labeled.examples) {
    CHECK(ex.label.has_value());
    CHECK(ex.origin == Origin::kDistilled);
  }

  // Permuting the pool permutes the labels identically.
  Dataset reversed;
  reversed.examples = {pool.examples[2], pool.examples[1], pool.examples[0]};
  Dataset labeled_rev = label_dataset(reversed, *teacher);
  CHECK(*labeled_rev.examples[0].label == *labeled.examples[2].label);
  CHECK(*labeled_rev.examples[2].label == *labeled.examples[0].label);
}

TEST_CASE("gold labels survive unless overwrite is requested") {
  OracleConfig oc;
  auto teacher = make_synthetic_teacher(oc);
  Dataset pool;
  Example gold = pair_of("k l", "k l");
  gold.label = 0.123;
  pool.examples = {gold};
  auto kept = label_dataset(pool, *teacher, false);
  CHECK(*kept.examples[0].label == 0.123);
  CHECK(kept.examples[0].origin == Origin::kGold);
  auto overwritten = label_dataset(pool, *teacher, true);
  CHECK(*overwritten.examples[0].label == 1.0);  // identical pair, no noise
  CHECK(overwritten.examples[0].origin == Origin::kDistilled);
}

TEST_CASE("file teacher covers the pool or fails with the first miss") {
  Dataset preds;
  Example row = pair_of("hello", "hallo");
  row.label = 0.6;
  preds.examples = {row};
  preds.name = "preds.tsv";
  auto teacher = make_file_teacher(preds);

  Dataset pool;
  pool.examples = {pair_of("  hello ", "hallo")};  // trimmed key match
  auto labeled = label_dataset(pool, *teacher);
  CHECK(*labeled.examples[0].label == 0.6);

  pool.examples.push_back(pair_of("missing", "pair"));
  pool.examples.push_back(pair_of("also-missing", "pair2"));
  CHECK_THROWS_WITH_AS(label_dataset(pool, *teacher),
                       doctest::Contains("missing"), LookupError);
}

TEST_CASE("ensemble teacher labels with member zero and fills variances") {
  Dataset train_set = tiny_dataset(12, 11);
  Dataset val = tiny_dataset(4, 12);
  Vocabulary vocab = Vocabulary::build(train_set);
  auto members = train_ensemble(train_set, val, vocab, 3, 70, tiny_model(),
                                tiny_train(0));
  Model member0 = members[0];
  auto teacher = make_ensemble_teacher(std::move(members));
  Dataset pool;
  pool.examples = {pair_of("a1 b2", "c3"), pair_of("a2", "c1 c2")};
  Dataset labeled = label_dataset(pool, *teacher);
  for (size_t i = 0; i < pool.size(); ++i) {
    const auto& ex = labeled.examples[i];
    REQUIRE(ex.label.has_value());
    REQUIRE(ex.variance.has_value());
    CHECK(*ex.variance >= 0.0);
    CHECK(*ex.label == member0.predict_pair(pool.examples[i].source,
                                            pool.examples[i].mt));
  }
}

TEST_CASE("teacher labels spread less than gold labels when quieter") {
  // Same pairs, two noise widths around the same planted values.
  OracleConfig teacher_cfg, gold_cfg;
  teacher_cfg.sigma = 0.05;
  teacher_cfg.seed = 31;
  gold_cfg.sigma = 0.15;
  gold_cfg.seed = 32;
  Rng rng(33);
  double var_t = 0.0, var_g = 0.0;
  const int n = 4000;
  std::vector<double> t_vals, g_vals;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> src = {"p" + std::to_string(rng.bounded(40)),
                                    "q", "r"};
    std::vector<std::string> mt = {src[0], "q",
                                   "z" + std::to_string(rng.bounded(40))};
    double clean = planted_quality(src, mt, teacher_cfg);
    t_vals.push_back(synthetic_quality(src, mt, teacher_cfg) - clean);
    g_vals.push_back(synthetic_quality(src, mt, gold_cfg) - clean);
  }
  auto [mt_, vt] = two_pass_mean_var(t_vals);
  auto [mg_, vg] = two_pass_mean_var(g_vals);
  var_t = vt;
  var_g = vg;
  CHECK(var_t < var_g);
}

TEST_SUITE_END();
