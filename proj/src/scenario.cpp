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

#include "qedistill/scenario.hpp"

#include <unordered_set>

#include "qedistill/rng.hpp"

namespace qed {

void ScenarioConfig::validate() const {
  if (vocab_size < 2) throw ConfigError("scenario: vocab_size must be >= 2");
  if (min_tokens < 1 || max_tokens < min_tokens) {
    throw ConfigError("scenario: bad token length bounds");
  }
  if (train_size < 2 || val_size < 2 || test_size < 2 || pool_size < 2 ||
      shifted_pool_size < 2) {
    throw ConfigError("scenario: every pool needs at least 2 examples");
  }
  if (sigma_gold < 0 || sigma_teacher < 0 || sigma_teacher_shifted < 0) {
    throw ConfigError("scenario: noise levels must be >= 0");
  }
}

namespace {

// Zipf-like sampler over [0, n); `inverted` flips which ids are frequent.
class TokenSampler {
 public:
  TokenSampler(int n, bool inverted) : n_(n), inverted_(inverted) {
    cumulative_.reserve(n);
    double total = 0.0;
    for (int rank = 0; rank < n; ++rank) {
      total += 1.0 / (rank + 5.0);
      cumulative_.push_back(total);
    }
    total_ = total;
  }

  int draw(Rng& rng) const {
    double u = rng.uniform01() * total_;
    size_t lo = 0, hi = cumulative_.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      if (cumulative_[mid - 1] > u) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    int rank = static_cast<int>(lo);
    return inverted_ ? n_ - 1 - rank : rank;
  }

 private:
  int n_;
  bool inverted_;
  double total_ = 0.0;
  std::vector<double> cumulative_;
};

std::string src_token(int id) { return "s" + std::to_string(id); }
std::string tgt_token(int id) { return "t" + std::to_string(id); }

struct PairGen {
  const ScenarioConfig* cfg;
  const TokenSampler* sampler;
  Rng* rng;
  std::unordered_set<std::string>* seen;

  Example next() const {
    for (;;) {
      int len = cfg->min_tokens +
                static_cast<int>(rng->bounded(
                    static_cast<uint64_t>(cfg->max_tokens - cfg->min_tokens) +
                    1));
      std::vector<std::string> src, mt;
      src.reserve(len);
      for (int i = 0; i < len; ++i) {
        src.push_back(src_token(sampler->draw(*rng)));
      }
      // Corrupt a pair-specific fraction of tokens so planted quality
      // spreads over the whole range.
      double error_rate = rng->uniform(0.0, 0.85);
      for (int i = 0; i < len; ++i) {
        double u = rng->uniform01();
        int correct = std::stoi(src[i].substr(1));
        if (u >= error_rate) {
          mt.push_back(tgt_token(correct));
        } else if (u < error_rate * 0.15) {
          continue;  // dropped token
        } else if (u < error_rate * 0.30) {
          mt.push_back(tgt_token(sampler->draw(*rng)));  // spurious insert
          mt.push_back(tgt_token(correct));
        } else {
          mt.push_back(tgt_token(sampler->draw(*rng)));  // wrong word
        }
      }
      if (mt.empty()) mt.push_back(tgt_token(sampler->draw(*rng)));
      Example ex;
      ex.source = join_tokens(src);
      ex.mt = join_tokens(mt);
      std::string key = ex.source + "\x1f" + ex.mt;
      if (seen->insert(std::move(key)).second) return ex;
    }
  }
};

Dataset make_set(const PairGen& gen, size_t n, const std::string& name,
                 const std::string& domain, const OracleConfig* labeler) {
  Dataset ds;
  ds.name = name;
  ds.domain = domain;
  ds.provenance = "synthetic";
  ds.examples.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Example ex = gen.next();
    if (labeler) {
      ex.label =
          synthetic_quality(ex.source_tokens(), ex.mt_tokens(), *labeler);
      ex.origin = Origin::kGold;
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace

ScenarioData generate_scenario(const ScenarioConfig& config) {
  config.validate();
  ScenarioData data;
  for (int i = 0; i < config.vocab_size; ++i) {
    data.oracle_clean.token_map.emplace(src_token(i), tgt_token(i));
  }
  data.oracle_clean.sigma = 0.0;
  data.oracle_clean.seed = config.master_seed;
  data.oracle_gold = data.oracle_clean;
  data.oracle_gold.sigma = config.sigma_gold;
  data.oracle_teacher = data.oracle_clean;
  data.oracle_teacher.sigma = config.sigma_teacher;
  data.oracle_shifted = data.oracle_clean;
  data.oracle_shifted.sigma = config.sigma_teacher_shifted;
  // Independent noise streams per role.
  data.oracle_gold.seed = config.master_seed * 2654435761u + 1;
  data.oracle_teacher.seed = config.master_seed * 2654435761u + 2;
  data.oracle_shifted.seed = config.master_seed * 2654435761u + 3;

  Rng rng(config.master_seed);
  TokenSampler in_domain(config.vocab_size, false);
  TokenSampler shifted(config.vocab_size, true);
  std::unordered_set<std::string> seen;

  PairGen gen_in{&config, &in_domain, &rng, &seen};
  PairGen gen_shift{&config, &shifted, &rng, &seen};

  data.train = make_set(gen_in, config.train_size, "train", "in-domain",
                        &data.oracle_gold);
  data.val =
      make_set(gen_in, config.val_size, "val", "in-domain", &data.oracle_gold);
  data.test = make_set(gen_in, config.test_size, "test", "in-domain",
                       &data.oracle_gold);
  data.pool =
      make_set(gen_in, config.pool_size, "pool", "in-domain", nullptr);
  data.shifted_pool = make_set(gen_shift, config.shifted_pool_size,
                               "shifted_pool", "shifted", nullptr);

  data.test_truth.reserve(config.test_size);
  for (const Example& ex : data.test.examples) {
    data.test_truth.push_back(
        planted_quality(ex.source_tokens(), ex.mt_tokens(),
                        data.oracle_clean));
  }
  return data;
}

}  // namespace qed
