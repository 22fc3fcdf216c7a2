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

#ifndef QEDISTILL_TEACHER_HPP_
#define QEDISTILL_TEACHER_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qedistill/dataset.hpp"
#include "qedistill/model_io.hpp"
#include "qedistill/trainer.hpp"

namespace qed {

// Planted quality function: harmonic mean of token-overlap precision and
// recall between the mapped source and the MT side, plus seeded Gaussian
// noise clamped to [0, 1]. Noise depends only on the pair content and the
// seed, so labeling is order-independent.
struct OracleConfig {
  std::unordered_map<std::string, std::string> token_map;  // empty: identity
  double sigma = 0.0;
  uint64_t seed = 0;
};

double synthetic_quality(const std::vector<std::string>& source_tokens,
                         const std::vector<std::string>& mt_tokens,
                         const OracleConfig& config);
// The clean planted value, before noise.
double planted_quality(const std::vector<std::string>& source_tokens,
                       const std::vector<std::string>& mt_tokens,
                       const OracleConfig& config);

struct TeacherLabel {
  double label = 0.0;
  std::optional<double> variance;
};

// A pluggable labeler: file-backed prediction table, in-framework model
// ensemble, or the synthetic oracle.
class Teacher {
 public:
  virtual ~Teacher() = default;
  virtual TeacherLabel label(const Example& example) const = 0;
  virtual bool provides_variance() const = 0;
  virtual int ensemble_size() const { return 0; }
  virtual std::string describe() const = 0;
};

// Keys on the exact (source, mt) strings after whitespace trimming; a
// missing pair fails loudly.
std::unique_ptr<Teacher> make_file_teacher(const Dataset& predictions);
std::unique_ptr<Teacher> make_synthetic_teacher(OracleConfig config);
// Member 0 provides the label; the variance is the population variance over
// all members' predictions. The ensemble mean is never used as a training
// label.
std::unique_ptr<Teacher> make_ensemble_teacher(std::vector<Model> members);

struct EnsemblePrediction {
  double mean = 0.0;
  double variance = 0.0;  // population variance over members
  std::vector<double> member_values;
};

// Requires >= 2 members with identical vocabularies and configs.
EnsemblePrediction ensemble_predict(std::span<const Model> members,
                                    const Example& example);

// K independent trainings differing only in seed (base_seed + k).
std::vector<Model> train_ensemble(const Dataset& train_data,
                                  const Dataset& validation,
                                  const Vocabulary& vocab, int k,
                                  uint64_t base_seed,
                                  const ModelConfig& model_config,
                                  const TrainConfig& train_config);

// Labels every example, preserving order. Examples that already carry a
// label keep it unless overwrite_gold is set; teacher-labeled examples get
// origin=distilled and, for ensemble teachers, a variance.
Dataset label_dataset(const Dataset& pool, const Teacher& teacher,
                      bool overwrite_gold = false);

}  // namespace qed

#endif  // QEDISTILL_TEACHER_HPP_
