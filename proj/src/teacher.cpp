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

#include "qedistill/teacher.hpp"

#include <algorithm>
#include <cmath>

#include "qedistill/parallel.hpp"
#include "qedistill/rng.hpp"

namespace qed {

double planted_quality(const std::vector<std::string>& source_tokens,
                       const std::vector<std::string>& mt_tokens,
                       const OracleConfig& config) {
  if (source_tokens.empty() || mt_tokens.empty()) return 0.0;
  std::unordered_map<std::string, int> expected;
  for (const std::string& t : source_tokens) {
    auto it = config.token_map.find(t);
    ++expected[it == config.token_map.end() ? t : it->second];
  }
  int overlap = 0;
  for (const std::string& t : mt_tokens) {
    auto it = expected.find(t);
    if (it != expected.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) /
                     static_cast<double>(mt_tokens.size());
  double recall = static_cast<double>(overlap) /
                  static_cast<double>(source_tokens.size());
  return 2.0 * precision * recall / (precision + recall);
}

double synthetic_quality(const std::vector<std::string>& source_tokens,
                         const std::vector<std::string>& mt_tokens,
                         const OracleConfig& config) {
  double q = planted_quality(source_tokens, mt_tokens, config);
  if (config.sigma > 0.0) {
    // Seed from the pair content so the noise is a pure function of the
    // example, not of labeling order.
    uint64_t h = fnv1a64("oracle");
    for (const auto& t : source_tokens) h = fnv1a64(t, fnv1a64("\x1f", h));
    h = fnv1a64("\x1e", h);
    for (const auto& t : mt_tokens) h = fnv1a64(t, fnv1a64("\x1f", h));
    Rng rng(h ^ config.seed);
    q += config.sigma * rng.gaussian();
  }
  return std::clamp(q, 0.0, 1.0);
}

namespace {

std::string pair_key(const Example& ex) {
  return std::string(trim(ex.source)) + "\t" + std::string(trim(ex.mt));
}

class FileTeacher : public Teacher {
 public:
  explicit FileTeacher(const Dataset& predictions) {
    for (const Example& ex : predictions.examples) {
      if (!ex.label) {
        throw ContractError("teacher file: unlabeled row for pair '" +
                            ex.source + "' / '" + ex.mt + "'");
      }
      TeacherLabel tl{*ex.label, ex.variance};
      table_.emplace(pair_key(ex), tl);
    }
    name_ = "file(" + predictions.name + ")";
  }

  TeacherLabel label(const Example& example) const override {
    auto it = table_.find(pair_key(example));
    if (it == table_.end()) {
      throw LookupError("teacher file: no prediction for pair '" +
                        example.source + "' / '" + example.mt + "'");
    }
    return it->second;
  }
  bool provides_variance() const override { return false; }
  std::string describe() const override { return name_; }

 private:
  std::unordered_map<std::string, TeacherLabel> table_;
  std::string name_;
};

class SyntheticTeacher : public Teacher {
 public:
  explicit SyntheticTeacher(OracleConfig config) : config_(std::move(config)) {}
  TeacherLabel label(const Example& example) const override {
    return {synthetic_quality(example.source_tokens(), example.mt_tokens(),
                              config_),
            std::nullopt};
  }
  bool provides_variance() const override { return false; }
  std::string describe() const override {
    return "synthetic(sigma=" + format_double(config_.sigma) + ")";
  }

 private:
  OracleConfig config_;
};

class EnsembleTeacher : public Teacher {
 public:
  explicit EnsembleTeacher(std::vector<Model> members)
      : members_(std::move(members)) {
    if (members_.size() < 2) {
      throw ConfigError("ensemble teacher: needs at least 2 members");
    }
  }
  TeacherLabel label(const Example& example) const override {
    EnsemblePrediction p = ensemble_predict(members_, example);
    // Member 0 is the labeling teacher; the rest only inform the variance.
    return {p.member_values[0], p.variance};
  }
  bool provides_variance() const override { return true; }
  int ensemble_size() const override {
    return static_cast<int>(members_.size());
  }
  std::string describe() const override {
    return "ensemble(k=" + std::to_string(members_.size()) + ")";
  }

 private:
  std::vector<Model> members_;
};

}  // namespace

std::unique_ptr<Teacher> make_file_teacher(const Dataset& predictions) {
  return std::make_unique<FileTeacher>(predictions);
}
std::unique_ptr<Teacher> make_synthetic_teacher(OracleConfig config) {
  return std::make_unique<SyntheticTeacher>(std::move(config));
}
std::unique_ptr<Teacher> make_ensemble_teacher(std::vector<Model> members) {
  return std::make_unique<EnsembleTeacher>(std::move(members));
}

EnsemblePrediction ensemble_predict(std::span<const Model> members,
                                    const Example& example) {
  if (members.size() < 2) {
    throw ContractError("ensemble_predict: needs at least 2 members");
  }
  for (size_t i = 1; i < members.size(); ++i) {
    if (!(members[i].src_vocab == members[0].src_vocab) ||
        !(members[i].mt_vocab == members[0].mt_vocab)) {
      throw ContractError("ensemble_predict: member " + std::to_string(i) +
                          " has a mismatched vocabulary");
    }
  }
  EnsemblePrediction out;
  out.member_values.resize(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    out.member_values[i] = members[i].predict_pair(example.source, example.mt);
  }
  // Two-pass population variance.
  double sum = 0.0;
  for (double v : out.member_values) sum += v;
  out.mean = sum / static_cast<double>(members.size());
  double sq = 0.0;
  for (double v : out.member_values) {
    double d = v - out.mean;
    sq += d * d;
  }
  out.variance = sq / static_cast<double>(members.size());
  return out;
}

std::vector<Model> train_ensemble(const Dataset& train_data,
                                  const Dataset& validation,
                                  const Vocabulary& vocab, int k,
                                  uint64_t base_seed,
                                  const ModelConfig& model_config,
                                  const TrainConfig& train_config) {
  if (k < 2) {
    throw ConfigError("train_ensemble: K must be >= 2, got " +
                      std::to_string(k));
  }
  std::vector<Model> members;
  members.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    TrainConfig tc = train_config;
    tc.seed = base_seed + static_cast<uint64_t>(i);
    members.push_back(
        train(train_data, validation, vocab, model_config, tc).model);
  }
  return members;
}

Dataset label_dataset(const Dataset& pool, const Teacher& teacher,
                      bool overwrite_gold) {
  Dataset out;
  out.name = pool.name;
  out.domain = pool.domain;
  out.provenance = pool.provenance;
  out.examples.resize(pool.size());

  for (size_t i = 0; i < pool.size(); ++i) {
    const Example& ex = pool.examples[i];
    if (trim(ex.source).empty() || trim(ex.mt).empty()) {
      throw ContractError("label_dataset: example " + std::to_string(i) +
                          " is missing a sentence");
    }
  }

  std::exception_ptr first_error;
  int64_t first_error_index = -1;
  parallel_for(static_cast<int64_t>(pool.size()), [&](int64_t i) {
    const Example& ex = pool.examples[i];
    Example labeled = ex;
    try {
      if (!ex.label || overwrite_gold) {
        TeacherLabel tl = teacher.label(ex);
        labeled.label = tl.label;
        labeled.variance = tl.variance;
        labeled.origin = Origin::kDistilled;
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(qed_label_error)
#endif
      {
        if (first_error_index < 0 || i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
      }
    }
    out.examples[i] = std::move(labeled);
  });
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace qed
