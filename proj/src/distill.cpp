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

#include "qedistill/distill.hpp"

#include <cmath>
#include <numeric>

#include "qedistill/rng.hpp"

namespace qed {

std::pair<Dataset, FilterStats> filter_by_variance(const Dataset& candidates,
                                                   bool two_sided) {
  std::vector<double> vars;
  vars.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Example& ex = candidates.examples[i];
    if (!ex.variance) {
      throw ContractError("filter_by_variance: example " + std::to_string(i) +
                          " has no variance");
    }
    vars.push_back(*ex.variance);
  }
  FilterStats stats;
  stats.two_sided = two_sided;
  if (!vars.empty()) {
    double sum = 0.0;
    for (double v : vars) sum += v;
    stats.mean_variance = sum / static_cast<double>(vars.size());
    double sq = 0.0;
    for (double v : vars) {
      double d = v - stats.mean_variance;
      sq += d * d;
    }
    stats.std_variance = std::sqrt(sq / static_cast<double>(vars.size()));
  }
  stats.threshold = stats.mean_variance + stats.std_variance;
  const double lower = stats.mean_variance - stats.std_variance;

  Dataset kept;
  kept.name = candidates.name;
  kept.domain = candidates.domain;
  kept.provenance = candidates.provenance;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double v = vars[i];
    bool keep = v <= stats.threshold && (!two_sided || v >= lower);
    if (keep) {
      kept.examples.push_back(candidates.examples[i]);
    }
  }
  stats.kept = kept.size();
  stats.dropped = candidates.size() - kept.size();
  return {std::move(kept), stats};
}

PipelineResult run_pipeline(const Dataset& pool, const Teacher& teacher,
                            const PipelineOptions& options,
                            const Manifest& extra) {
  if (options.output_path.empty()) {
    throw ConfigError("run_pipeline: output path is required");
  }
  if (options.filter && !teacher.provides_variance()) {
    throw ConfigError(
        "run_pipeline: variance filtering needs an ensemble teacher, got " +
        teacher.describe());
  }
  PipelineResult result;
  result.distilled = label_dataset(pool, teacher, options.overwrite_gold);
  Manifest manifest;
  manifest.set("pool_size", static_cast<int64_t>(pool.size()));
  manifest.set("teacher", teacher.describe());
  manifest.set("K", static_cast<int64_t>(teacher.ensemble_size()));
  if (options.filter) {
    auto [kept, stats] = filter_by_variance(result.distilled,
                                            options.two_sided);
    result.distilled = std::move(kept);
    result.filter_stats = stats;
    manifest.set("filter", stats.two_sided ? "two-sided" : "one-sided");
    manifest.set("mu_v", stats.mean_variance);
    manifest.set("sigma_v", stats.std_variance);
    manifest.set("threshold", stats.threshold);
    manifest.set("kept", static_cast<int64_t>(stats.kept));
    manifest.set("dropped", static_cast<int64_t>(stats.dropped));
  } else {
    manifest.set("filter", "off");
    manifest.set("kept", static_cast<int64_t>(result.distilled.size()));
    manifest.set("dropped", static_cast<int64_t>(0));
  }
  manifest.set("seed", options.seed);
  manifest.merge(extra);
  write_pairs(result.distilled, options.output_path);
  result.manifest_path = options.output_path + ".manifest";
  manifest.write(result.manifest_path);
  return result;
}

std::vector<Dataset> size_subsets(const Dataset& dataset,
                                  const std::vector<size_t>& sizes,
                                  uint64_t seed) {
  for (size_t s : sizes) {
    if (s > dataset.size()) {
      throw ConfigError("size_subsets: requested " + std::to_string(s) +
                        " examples from a dataset of " +
                        std::to_string(dataset.size()));
    }
  }
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<Dataset> subsets;
  subsets.reserve(sizes.size());
  for (size_t s : sizes) {
    Dataset sub;
    sub.name = dataset.name + "[" + std::to_string(s) + "]";
    sub.domain = dataset.domain;
    sub.provenance = dataset.provenance;
    sub.examples.reserve(s);
    for (size_t i = 0; i < s; ++i) {
      sub.examples.push_back(dataset.examples[order[i]]);
    }
    subsets.push_back(std::move(sub));
  }
  return subsets;
}

}  // namespace qed
