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

#include "qedistill/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "qedistill/dataset.hpp"
#include "qedistill/errors.hpp"

namespace qed {

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractError("pearson: length mismatch, " +
                        std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw MetricError("pearson: needs at least 2 points, got " +
                      std::to_string(x.size()));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

namespace {
std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<size_t> order(x.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}
}  // namespace

std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractError("spearman: length mismatch");
  }
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

EvalReport evaluate_predictions(std::span<const double> predictions,
                                std::span<const double> labels) {
  if (predictions.size() != labels.size()) {
    throw ContractError("evaluate: predictions/labels length mismatch");
  }
  if (predictions.size() < 2) {
    throw MetricError("evaluate: needs at least 2 examples");
  }
  EvalReport r;
  r.n = predictions.size();
  double se = 0.0, ae = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    double d = predictions[i] - labels[i];
    se += d * d;
    ae += std::fabs(d);
  }
  r.mse = se / static_cast<double>(r.n);
  r.mae = ae / static_cast<double>(r.n);
  r.rmse = std::sqrt(r.mse);
  r.pearson = pearson(predictions, labels);
  return r;
}

BinReport bin_variance_error(std::span<const double> predictions,
                             std::span<const double> labels,
                             std::span<const double> variances, int bins) {
  if (predictions.size() != labels.size() ||
      predictions.size() != variances.size()) {
    throw ContractError("bin_variance_error: input lengths differ");
  }
  if (bins < 2) throw ConfigError("bin_variance_error: bins must be >= 2");
  const size_t n = predictions.size();
  if (n < static_cast<size_t>(bins)) {
    throw ConfigError("bin_variance_error: n=" + std::to_string(n) +
                      " is smaller than bins=" + std::to_string(bins));
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return variances[a] < variances[b];
  });

  BinReport report;
  report.n = n;
  const size_t base = n / static_cast<size_t>(bins);
  const size_t remainder = n % static_cast<size_t>(bins);
  size_t pos = 0;
  for (int b = 0; b < bins; ++b) {
    size_t len = base + (static_cast<size_t>(b) < remainder ? 1 : 0);
    Bin bin;
    bin.index = b;
    bin.count = len;
    bin.variance_min = variances[order[pos]];
    bin.variance_max = variances[order[pos + len - 1]];
    double err = 0.0;
    for (size_t k = pos; k < pos + len; ++k) {
      size_t i = order[k];
      err += std::fabs(predictions[i] - labels[i]);
    }
    bin.mean_abs_error = err / static_cast<double>(len);
    report.bins.push_back(bin);
    pos += len;
  }
  return report;
}

Histogram histogram(std::span<const double> values, int bin_count, double lo,
                    double hi) {
  if (bin_count < 1) throw ConfigError("histogram: bin_count must be >= 1");
  if (!(lo < hi)) throw ConfigError("histogram: invalid range");
  Histogram h;
  h.counts.assign(static_cast<size_t>(bin_count), 0);
  h.edges.resize(static_cast<size_t>(bin_count) + 1);
  const double width = (hi - lo) / bin_count;
  for (int i = 0; i <= bin_count; ++i) h.edges[i] = lo + width * i;
  h.edges.back() = hi;
  for (double v : values) {
    int idx = static_cast<int>(std::floor((v - lo) / width));
    idx = std::clamp(idx, 0, bin_count - 1);
    ++h.counts[static_cast<size_t>(idx)];
  }
  return h;
}

void write_eval_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "metric,value\n";
  out << "pearson,"
      << (report.pearson ? format_double(*report.pearson) : "undefined")
      << "\n";
  out << "mae," << format_double(report.mae) << "\n";
  out << "mse," << format_double(report.mse) << "\n";
  out << "rmse," << format_double(report.rmse) << "\n";
  out << "n," << report.n << "\n";
}

void write_bins_jsonl(const BinReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const Bin& b : report.bins) {
    nlohmann::json j{{"bin", b.index},
                     {"variance_min", b.variance_min},
                     {"variance_max", b.variance_max},
                     {"mean_abs_error", b.mean_abs_error},
                     {"count", b.count}};
    out << j.dump() << "\n";
  }
}

void write_histogram_jsonl(const Histogram& hist, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (size_t i = 0; i < hist.counts.size(); ++i) {
    nlohmann::json j{{"bin", i},
                     {"lo", hist.edges[i]},
                     {"hi", hist.edges[i + 1]},
                     {"count", hist.counts[i]}};
    out << j.dump() << "\n";
  }
}

}  // namespace qed
