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

#include <set>
#include <sstream>

#include "doctest.h"
#include "qedistill/distill.hpp"
#include "qedistill/scenario.hpp"
#include "qedistill/sweep.hpp"

using namespace qed;

namespace {

ScenarioConfig tiny_scenario(uint64_t seed) {
  ScenarioConfig sc;
  sc.vocab_size = 40;
  sc.train_size = 60;
  sc.val_size = 20;
  sc.test_size = 20;
  sc.pool_size = 40;
  sc.shifted_pool_size = 30;
  sc.master_seed = seed;
  return sc;
}

std::string fingerprint(const ScenarioData& d) {
  std::ostringstream os;
  for (const Dataset* ds :
       {&d.train, &d.val, &d.test, &d.pool, &d.shifted_pool}) {
    for (const Example& ex : ds->examples) {
      os << ex.source << '|' << ex.mt << '|'
         << (ex.label ? format_double(*ex.label) : "-") << '\n';
    }
  }
  for (double t : d.test_truth) os << format_double(t) << ';';
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("scenario generation is deterministic in the master seed") {
  auto a = generate_scenario(tiny_scenario(5));
  auto b = generate_scenario(tiny_scenario(5));
  auto c = generate_scenario(tiny_scenario(6));
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a) != fingerprint(c));
}

TEST_CASE("all pools are pairwise disjoint on the sentence pair") {
  auto data = generate_scenario(tiny_scenario(7));
  std::set<std::string> seen;
  size_t total = 0;
  for (const Dataset* ds : {&data.train, &data.val, &data.test, &data.pool,
                            &data.shifted_pool}) {
    for (const Example& ex : ds->examples) {
      seen.insert(ex.source + "\x1f" + ex.mt);
      ++total;
    }
  }
  CHECK(seen.size() == total);
}

TEST_CASE("zero gold noise reproduces the planted function exactly") {
  ScenarioConfig sc = tiny_scenario(8);
  sc.sigma_gold = 0.0;
  auto data = generate_scenario(sc);
  for (const Example& ex : data.train.examples) {
    REQUIRE(ex.label.has_value());
    CHECK(*ex.label == planted_quality(ex.source_tokens(), ex.mt_tokens(),
                                       data.oracle_clean));
  }
  // Test labels equal the stored ground truth as well.
  for (size_t i = 0; i < data.test.size(); ++i) {
    CHECK(*data.test.examples[i].label == data.test_truth[i]);
  }
}

TEST_CASE("labels cover a usable range") {
  auto data = generate_scenario(tiny_scenario(9));
  double lo = 1.0, hi = 0.0;
  for (const Example& ex : data.train.examples) {
    lo = std::min(lo, *ex.label);
    hi = std::max(hi, *ex.label);
  }
  CHECK(lo < 0.3);
  CHECK(hi > 0.7);
}

TEST_CASE("shifted pool has a different token profile") {
  auto data = generate_scenario(tiny_scenario(10));
  auto head_share = [&](const Dataset& ds) {
    size_t head = 0, total = 0;
    for (const Example& ex : ds.examples) {
      for (const auto& t : ex.source_tokens()) {
        ++total;
        int id = std::stoi(t.substr(1));
        if (id < 10) ++head;
      }
    }
    return static_cast<double>(head) / static_cast<double>(total);
  };
  CHECK(head_share(data.pool) > 0.5);
  CHECK(head_share(data.shifted_pool) < 0.2);
}

TEST_CASE("sweep with one repeat reports zero spread") {
  auto data = generate_scenario(tiny_scenario(11));
  auto teacher = make_synthetic_teacher(data.oracle_teacher);
  Dataset labeled = label_dataset(data.pool, *teacher);
  auto subsets = size_subsets(labeled, {20, 40}, 3);

  ModelConfig mc;
  mc.embedding_dim = 8;
  mc.hidden_dim = 4;
  mc.max_len = 16;
  TrainConfig tc;
  tc.batch_size = 16;
  tc.max_epochs = 2;
  tc.patience = 2;

  auto rows = sweep(subsets, data.val, data.test, &data.test_truth, mc, tc,
                    1, 77);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size == 20);
  CHECK(rows[1].size == 40);
  CHECK(rows[0].max_abs_dev == 0.0);
  CHECK(rows[1].max_abs_dev == 0.0);

  auto dir = std::filesystem::temp_directory_path() / "qedistill_tests";
  std::filesystem::create_directories(dir);
  write_sweep_csv(rows, (dir / "sweep.csv").string());
  CHECK(std::filesystem::file_size(dir / "sweep.csv") > 0);
}

TEST_CASE("sweep accepts the published subset shape") {
  // The size list itself is arbitrary; the guard is only that subsets fit.
  Dataset big;
  for (int i = 0; i < 100000; ++i) {
    Example ex;
    ex.source = "s" + std::to_string(i);
    ex.mt = "t" + std::to_string(i);
    ex.label = 0.5;
    big.examples.push_back(ex);
  }
  auto subsets = size_subsets(big, {10000, 50000, 70000, 100000}, 1);
  CHECK(subsets.size() == 4);
  CHECK(subsets[3].size() == 100000);
}

TEST_SUITE_END();
