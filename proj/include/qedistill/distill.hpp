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

#ifndef QEDISTILL_DISTILL_HPP_
#define QEDISTILL_DISTILL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qedistill/manifest.hpp"
#include "qedistill/teacher.hpp"

namespace qed {

struct FilterStats {
  double mean_variance = 0.0;
  double std_variance = 0.0;  // population
  double threshold = 0.0;     // mean + std
  size_t kept = 0;
  size_t dropped = 0;
  bool two_sided = false;
};

// Keeps example i iff v_i <= mean + std (one-sided: only suspiciously noisy
// high-variance labels are dropped). two_sided additionally drops variances
// below mean - std. Statistics are computed over the candidate set itself;
// order is preserved. Every example must carry a variance.
std::pair<Dataset, FilterStats> filter_by_variance(const Dataset& candidates,
                                                   bool two_sided = false);

struct PipelineOptions {
  bool filter = false;
  bool two_sided = false;
  bool overwrite_gold = false;
  uint64_t seed = 0;
  std::string output_path;  // labeled TSV; manifest lands next to it
};

struct PipelineResult {
  Dataset distilled;
  std::optional<FilterStats> filter_stats;
  std::string manifest_path;
};

// Label -> optionally filter -> write, with a provenance manifest. Filtering
// needs an ensemble teacher (the only variance source in the pipeline).
PipelineResult run_pipeline(const Dataset& pool, const Teacher& teacher,
                            const PipelineOptions& options,
                            const Manifest& extra = {});

// One seeded shuffle, then prefix subsets: with ascending sizes each subset
// contains the previous one.
std::vector<Dataset> size_subsets(const Dataset& dataset,
                                  const std::vector<size_t>& sizes,
                                  uint64_t seed);

}  // namespace qed

#endif  // QEDISTILL_DISTILL_HPP_
