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

#ifndef QEDISTILL_FINDINGS_HPP_
#define QEDISTILL_FINDINGS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "qedistill/scenario.hpp"
#include "qedistill/trainer.hpp"

namespace qed {

// End-to-end experiment suite over a synthetic scenario. Each claim row
// carries its measured value, the pinned threshold, and pass/fail.
struct FindingsConfig {
  ScenarioConfig scenario;
  ModelConfig student;     // desk-scale by default; vocab size comes from data
  TrainConfig train;
  int seeds = 3;           // repetitions per training comparison
  int ensemble_k = 5;
  double small_fraction = 0.10;  // nested subset sizes for the data sweep
  double large_fraction = 0.50;
  size_t shifted_train_cap = 6000;
  std::string outdir;      // findings.csv etc. land here when non-empty

  static FindingsConfig desk_default(uint64_t seed);
};

struct FindingRow {
  std::string id;
  std::string detail;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparator;  // ">=", ">", "in[lo,hi]", "info"
  std::string status;      // pass / fail / info / no-gap
};

struct FindingsReport {
  std::vector<FindingRow> rows;
  bool all_pass = true;  // over pass/fail rows only
};

FindingsReport run_findings_suite(const FindingsConfig& config,
                                  std::ostream* log = nullptr);

void write_findings_csv(const FindingsReport& report,
                        const std::string& path);

// Parameter count (closed form) and measured single-pair inference latency.
struct EfficiencyReport {
  int64_t parameter_count = 0;            // for the given config
  int64_t reference_parameter_count = 0;  // at full-scale reference dims
  int tokens_per_side = 0;
  double latency_ms = 0.0;  // median over runs, single thread
};

// Reference dims: 30k-word vocabulary (+2 specials), embeddings 300, hidden
// 50 per direction.
ModelConfig reference_full_scale_config();

EfficiencyReport efficiency_report(const ModelConfig& config,
                                   const ModelParams& params,
                                   int tokens_per_side = 20, int runs = 51);

void print_efficiency(const EfficiencyReport& report, std::ostream& out);

}  // namespace qed

#endif  // QEDISTILL_FINDINGS_HPP_
