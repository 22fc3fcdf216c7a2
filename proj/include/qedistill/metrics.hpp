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

#ifndef QEDISTILL_METRICS_HPP_
#define QEDISTILL_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qed {

// Sample Pearson correlation. Returns nullopt (never NaN) when either vector
// has zero variance; a constant-prediction model must surface loudly, not as
// a quiet NaN.
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);

// Spearman rank correlation (average ranks on ties).
std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y);

struct EvalReport {
  std::optional<double> pearson;
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  size_t n = 0;
};

EvalReport evaluate_predictions(std::span<const double> predictions,
                                std::span<const double> labels);

struct Bin {
  int index = 0;
  double variance_min = 0.0;
  double variance_max = 0.0;
  double mean_abs_error = 0.0;
  size_t count = 0;
};

struct BinReport {
  std::vector<Bin> bins;
  size_t n = 0;
};

// Sorts by variance (stable), splits into `bins` groups whose sizes differ
// by at most one (remainder goes to the leading groups), and reports the
// mean absolute prediction error per group.
BinReport bin_variance_error(std::span<const double> predictions,
                             std::span<const double> labels,
                             std::span<const double> variances, int bins = 10);

struct Histogram {
  std::vector<double> edges;   // bin_count + 1 edges
  std::vector<size_t> counts;  // sums to the number of values
};

// Fixed-width bins over [lo, hi]; out-of-range values are clamped into the
// edge bins.
Histogram histogram(std::span<const double> values, int bin_count, double lo,
                    double hi);

// CSV / JSON-lines emission for plot tooling.
void write_eval_csv(const EvalReport& report, const std::string& path);
void write_bins_jsonl(const BinReport& report, const std::string& path);
void write_histogram_jsonl(const Histogram& hist, const std::string& path);

}  // namespace qed

#endif  // QEDISTILL_METRICS_HPP_
