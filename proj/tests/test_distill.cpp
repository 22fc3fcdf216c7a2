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

#include "doctest.h"
#include "qedistill/distill.hpp"
#include "qedistill/rng.hpp"

using namespace qed;
namespace fs = std::filesystem;

namespace {

Dataset with_variances(const std::vector<double>& vars) {
  Dataset ds;
  for (size_t i = 0; i < vars.size(); ++i) {
    Example ex;
    ex.source = "s" + std::to_string(i);
    ex.mt = "t" + std::to_string(i);
    ex.label = 0.5;
    ex.variance = vars[i];
    ds.examples.push_back(ex);
  }
  return ds;
}

// Brute-force oracle: recompute the statistics independently and return the
// kept index set.
std::vector<size_t> kept_indices_oracle(const std::vector<double>& vars,
                                        bool two_sided) {
  double mu = 0.0;
  for (double v : vars) mu += v;
  mu /= static_cast<double>(vars.size());
  double sq = 0.0;
  for (double v : vars) sq += (v - mu) * (v - mu);
  double sigma = std::sqrt(sq / static_cast<double>(vars.size()));
  std::vector<size_t> kept;
  for (size_t i = 0; i < vars.size(); ++i) {
    bool keep = vars[i] <= mu + sigma;
    if (two_sided && vars[i] < mu - sigma) keep = false;
    if (keep) kept.push_back(i);
  }
  return kept;
}

std::vector<size_t> kept_indices(const Dataset& in, const Dataset& out) {
  std::vector<size_t> kept;
  size_t j = 0;
  for (size_t i = 0; i < in.size() && j < out.size(); ++i) {
    if (in.examples[i].source == out.examples[j].source &&
        in.examples[i].mt == out.examples[j].mt) {
      kept.push_back(i);
      ++j;
    }
  }
  REQUIRE(j == out.size());
  return kept;
}

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "qedistill_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("distill");

TEST_CASE("variance filter hand-computed case") {
  // Variances 1,1,1,10: mean 3.25, population std sqrt(15.1875), threshold
  // about 7.1471. Only the last example is dropped.
  Dataset ds = with_variances({1.0, 1.0, 1.0, 10.0});
  auto [kept, stats] = filter_by_variance(ds);
  CHECK(stats.mean_variance == doctest::Approx(3.25).epsilon(1e-15));
  CHECK(stats.std_variance == doctest::Approx(3.89711).epsilon(1e-5));
  CHECK(stats.threshold == doctest::Approx(7.14711).epsilon(1e-5));
  CHECK(stats.kept == 3);
  CHECK(stats.dropped == 1);
  REQUIRE(kept.size() == 3);
  for (const auto& ex : kept.examples) CHECK(*ex.variance == 1.0);
}

TEST_CASE("equal variances keep everything") {
  Dataset ds = with_variances({0.2, 0.2, 0.2});
  auto [kept, stats] = filter_by_variance(ds);
  CHECK(stats.std_variance == 0.0);
  CHECK(stats.threshold == doctest::Approx(0.2));
  CHECK(kept.size() == 3);
}

TEST_CASE("a single example is kept") {
  Dataset ds = with_variances({0.7});
  auto [kept, stats] = filter_by_variance(ds);
  CHECK(kept.size() == 1);
  CHECK(stats.dropped == 0);
}

TEST_CASE("missing variance names the example") {
  Dataset ds = with_variances({0.1, 0.2, 0.3});
  ds.examples[1].variance.reset();
  CHECK_THROWS_WITH_AS(filter_by_variance(ds), doctest::Contains("1"),
                       ContractError);
}

TEST_CASE("filter matches the brute-force oracle on random vectors") {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 1 + rng.bounded(40);
    std::vector<double> vars;
    vars.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      double v = rng.uniform01();
      if (rng.bounded(8) == 0) v *= 25.0;  // occasional heavy outlier
      vars.push_back(v);
    }
    bool two_sided = rng.bounded(2) == 1;
    Dataset ds = with_variances(vars);
    auto [kept, stats] = filter_by_variance(ds, two_sided);
    CHECK(kept_indices(ds, kept) == kept_indices_oracle(vars, two_sided));
    CHECK(stats.kept + stats.dropped == n);
  }
}

TEST_CASE("kept set is invariant to positive scaling of all variances") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 2 + rng.bounded(30);
    std::vector<double> vars, scaled;
    double factor = 0.001 + 500.0 * rng.uniform01();
    for (size_t i = 0; i < n; ++i) {
      vars.push_back(rng.uniform01() * (1 + rng.bounded(5)));
      scaled.push_back(vars.back() * factor);
    }
    Dataset a = with_variances(vars);
    Dataset b = with_variances(scaled);
    CHECK(kept_indices(a, filter_by_variance(a).first) ==
          kept_indices(b, filter_by_variance(b).first));
  }
}

TEST_CASE("two-sided filter also drops unusually low variances") {
  std::vector<double> vars = {0.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 3.0};
  Dataset ds = with_variances(vars);
  auto [one_sided, s1] = filter_by_variance(ds, false);
  auto [two_sided, s2] = filter_by_variance(ds, true);
  CHECK(s2.two_sided);
  CHECK(two_sided.size() < one_sided.size());
}

TEST_CASE("pipeline without filter passes everything through") {
  OracleConfig oc;
  oc.sigma = 0.01;
  oc.seed = 5;
  auto teacher = make_synthetic_teacher(oc);
  Dataset pool;
  for (int i = 0; i < 7; ++i) {
    Example ex;
    ex.source = "w" + std::to_string(i) + " w" + std::to_string(i + 1);
    ex.mt = "w" + std::to_string(i) + " q";
    pool.examples.push_back(ex);
  }
  PipelineOptions opt;
  opt.output_path = (temp_dir() / "pipeline_out.tsv").string();
  opt.seed = 9;
  auto result = run_pipeline(pool, *teacher, opt);
  CHECK(result.distilled.size() == pool.size());
  CHECK_FALSE(result.filter_stats.has_value());
  CHECK(fs::exists(result.manifest_path));

  // Filtering with a variance-free teacher is a configuration error.
  PipelineOptions bad = opt;
  bad.filter = true;
  CHECK_THROWS_AS(run_pipeline(pool, *teacher, bad), ConfigError);
}

TEST_CASE("pipeline reruns are byte-identical") {
  OracleConfig oc;
  oc.sigma = 0.05;
  oc.seed = 17;
  auto teacher = make_synthetic_teacher(oc);
  Dataset pool;
  for (int i = 0; i < 9; ++i) {
    Example ex;
    ex.source = "a" + std::to_string(i * 3 % 7) + " b";
    ex.mt = "a" + std::to_string(i) + " c";
    pool.examples.push_back(ex);
  }
  auto run_once = [&](const std::string& name) {
    PipelineOptions opt;
    opt.output_path = (temp_dir() / name).string();
    opt.seed = 3;
    run_pipeline(pool, *teacher, opt);
    std::ifstream f(opt.output_path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    std::ifstream mf(opt.output_path + ".manifest", std::ios::binary);
    std::string manifest((std::istreambuf_iterator<char>(mf)),
                         std::istreambuf_iterator<char>());
    return data + "\x01" + manifest;
  };
  CHECK(run_once("rerun_a.tsv") == run_once("rerun_b.tsv"));
}

TEST_CASE("size_subsets nest and are seed-stable") {
  Dataset ds = with_variances({0.1, 0.2, 0.3, 0.4, 0.5});
  auto subsets = size_subsets(ds, {2, 4}, 42);
  REQUIRE(subsets.size() == 2);
  CHECK(subsets[0].size() == 2);
  CHECK(subsets[1].size() == 4);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(subsets[0].examples[i].source == subsets[1].examples[i].source);
  }
  auto again = size_subsets(ds, {2, 4}, 42);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(subsets[1].examples[i].source == again[1].examples[i].source);
  }

  auto full = size_subsets(ds, {5}, 7);
  CHECK(full[0].size() == 5);
  std::vector<std::string> sources;
  for (const auto& ex : full[0].examples) sources.push_back(ex.source);
  std::sort(sources.begin(), sources.end());
  CHECK(sources == std::vector<std::string>{"s0", "s1", "s2", "s3", "s4"});

  CHECK_THROWS_AS(size_subsets(ds, {6}, 1), ConfigError);
}

TEST_SUITE_END();
