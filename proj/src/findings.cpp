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

#include "qedistill/findings.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "qedistill/dataset.hpp"
#include "qedistill/distill.hpp"
#include "qedistill/rng.hpp"
#include "qedistill/sweep.hpp"

namespace qed {

FindingsConfig FindingsConfig::desk_default(uint64_t seed) {
  FindingsConfig fc;
  fc.scenario.master_seed = seed;
  fc.student.embedding_dim = 32;
  fc.student.hidden_dim = 16;
  fc.student.attention_dim = 32;
  fc.student.max_len = 16;
  fc.train.batch_size = 32;
  fc.train.max_epochs = 12;
  fc.train.patience = 3;
  fc.train.learning_rate = 3e-3;
  fc.train.seed = seed;
  return fc;
}

namespace {

double relabel_and_std(const Dataset& base, const OracleConfig& oracle,
                       std::vector<double>* out_labels = nullptr) {
  double sum = 0.0;
  std::vector<double> labels;
  labels.reserve(base.size());
  for (const Example& ex : base.examples) {
    double y = synthetic_quality(ex.source_tokens(), ex.mt_tokens(), oracle);
    labels.push_back(y);
    sum += y;
  }
  double mean = sum / static_cast<double>(labels.size());
  double sq = 0.0;
  for (double y : labels) sq += (y - mean) * (y - mean);
  if (out_labels) *out_labels = std::move(labels);
  return std::sqrt(sq / static_cast<double>(base.size()));
}

Dataset with_labels(const Dataset& base, const std::vector<double>& labels,
                    Origin origin) {
  Dataset out = base;
  for (size_t i = 0; i < out.size(); ++i) {
    out.examples[i].label = labels[i];
    out.examples[i].origin = origin;
  }
  return out;
}

struct TrainEval {
  std::optional<double> pearson;
};

TrainEval train_and_eval(const Dataset& train_set, const Dataset& val,
                         const Dataset& test,
                         const std::vector<double>& truth,
                         const ModelConfig& mc, TrainConfig tc,
                         uint64_t seed) {
  tc.seed = seed;
  Vocabulary vocab = Vocabulary::build(train_set);
  TrainResult result = train(train_set, val, vocab, mc, tc);
  auto preds = predict_dataset(result.model, test);
  return {pearson(preds, truth)};
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

void log_line(std::ostream* log, const std::string& line) {
  if (log) *log << line << "\n" << std::flush;
}

FindingRow threshold_row(const std::string& id, const std::string& detail,
                         double measured, double threshold,
                         const std::string& cmp) {
  FindingRow row{id, detail, measured, threshold, cmp, ""};
  bool ok = false;
  if (cmp == ">=") ok = measured >= threshold;
  else if (cmp == ">") ok = measured > threshold;
  else if (cmp == "<") ok = measured < threshold;
  row.status = ok ? "pass" : "fail";
  return row;
}

}  // namespace

FindingsReport run_findings_suite(const FindingsConfig& config,
                                  std::ostream* log) {
  FindingsReport report;
  auto add = [&](FindingRow row) {
    if (row.status == "fail") report.all_pass = false;
    log_line(log, "[" + row.status + "] " + row.id + ": measured " +
                      format_double(row.measured) + " vs " + row.comparator +
                      " " + format_double(row.threshold) + " (" + row.detail +
                      ")");
    report.rows.push_back(std::move(row));
  };

  log_line(log, "generating scenario (seed " +
                    std::to_string(config.scenario.master_seed) + ")");
  ScenarioData data = generate_scenario(config.scenario);
  const ModelConfig& mc = config.student;
  const TrainConfig& tc = config.train;
  const uint64_t base_seed = config.scenario.master_seed;

  // Sanity: the architecture can recover the planted function from clean
  // labels at all.
  {
    std::vector<double> clean;
    relabel_and_std(data.train, data.oracle_clean, &clean);
    Dataset clean_train = with_labels(data.train, clean, Origin::kDistilled);
    log_line(log, "sanity: training on noiseless labels");
    auto r = train_and_eval(clean_train, data.val, data.test, data.test_truth,
                            mc, tc, base_seed + 900);
    add(threshold_row("planted_recoverable",
                      "student on noiseless labels, Pearson vs planted truth",
                      r.pearson.value_or(0.0), 0.8, ">="));
  }

  // Gold vs distilled training on the same pairs.
  bool no_gap = config.scenario.sigma_teacher == config.scenario.sigma_gold;
  {
    std::vector<double> teacher_labels;
    relabel_and_std(data.train, data.oracle_teacher, &teacher_labels);
    Dataset distilled_train =
        with_labels(data.train, teacher_labels, Origin::kDistilled);
    std::vector<double> gold_r, dist_r;
    for (int s = 0; s < config.seeds; ++s) {
      log_line(log, "gold-vs-distilled: seed " + std::to_string(s));
      gold_r.push_back(train_and_eval(data.train, data.val, data.test,
                                      data.test_truth, mc, tc, base_seed + s)
                           .pearson.value_or(0.0));
      dist_r.push_back(train_and_eval(distilled_train, data.val, data.test,
                                      data.test_truth, mc, tc, base_seed + s)
                           .pearson.value_or(0.0));
    }
    double gap = mean_of(dist_r) - mean_of(gold_r);
    if (no_gap) {
      FindingRow row{"distilled_vs_gold_gap",
                     "equal label noise: no gap expected",
                     gap,
                     0.0,
                     "info",
                     "no-gap"};
      add(std::move(row));
    } else {
      add(threshold_row("distilled_vs_gold_gap",
                        "mean Pearson, teacher labels minus gold labels",
                        gap, 0.03, ">="));
    }
  }

  // Label distribution smoothing, three noise draws.
  {
    double min_gap = 1e300;
    for (int s = 0; s < config.seeds; ++s) {
      OracleConfig gold = data.oracle_gold;
      OracleConfig teach = data.oracle_teacher;
      gold.seed += static_cast<uint64_t>(s) * 7919;
      teach.seed += static_cast<uint64_t>(s) * 7919;
      double gap = relabel_and_std(data.train, gold) -
                   relabel_and_std(data.train, teach);
      min_gap = std::min(min_gap, gap);
    }
    add(threshold_row("label_std_smoothing",
                      "min over seeds of std(gold) - std(teacher)", min_gap,
                      0.0, ">"));
  }

  // Data size sweep over the teacher-labeled in-domain pool.
  {
    log_line(log, "size sweep: labeling the in-domain pool");
    auto teacher = make_synthetic_teacher(data.oracle_teacher);
    Dataset labeled_pool = label_dataset(data.pool, *teacher);
    size_t small = static_cast<size_t>(
        static_cast<double>(labeled_pool.size()) * config.small_fraction);
    size_t large = static_cast<size_t>(
        static_cast<double>(labeled_pool.size()) * config.large_fraction);
    auto subsets = size_subsets(labeled_pool, {small, large}, base_seed + 17);
    auto rows = sweep(subsets, data.val, data.test, &data.test_truth, mc, tc,
                      config.seeds, base_seed + 100);
    double gain = rows[1].mean_pearson.value_or(0.0) -
                  rows[0].mean_pearson.value_or(0.0);
    add(threshold_row(
        "size_gain",
        "mean Pearson at " + std::to_string(large) + " minus " +
            std::to_string(small) + " training pairs",
        gain, 0.01, ">="));
  }

  // Ensemble variance vs prediction error, and filtering on the shifted
  // pool.
  {
    log_line(log, "training the K=" + std::to_string(config.ensemble_k) +
                      " ensemble");
    auto members = train_ensemble(data.train, data.val,
                                  Vocabulary::build(data.train),
                                  config.ensemble_k, base_seed + 500, mc, tc);

    // Variance deciles vs mean absolute error on the test set.
    {
      std::vector<double> preds(data.test.size());
      std::vector<double> variances(data.test.size());
      for (size_t i = 0; i < data.test.size(); ++i) {
        auto p = ensemble_predict(members, data.test.examples[i]);
        preds[i] = p.mean;
        variances[i] = p.variance;
      }
      BinReport bins =
          bin_variance_error(preds, data.test_truth, variances, 10);
      std::vector<double> idx, err;
      for (const Bin& b : bins.bins) {
        idx.push_back(static_cast<double>(b.index));
        err.push_back(b.mean_abs_error);
      }
      add(threshold_row("variance_error_spearman",
                        "Spearman of variance decile index vs bin MAE",
                        spearman(idx, err).value_or(0.0), 0.5, ">="));
      if (!config.outdir.empty()) {
        write_bins_jsonl(bins, config.outdir + "/variance_bins.jsonl");
      }
    }

    // Filtered vs unfiltered distillation from the shifted pool. Member 0
    // labels; all members vote on the variance.
    {
      log_line(log, "labeling the shifted pool with the ensemble");
      auto ensemble = make_ensemble_teacher(members);
      Dataset labeled = label_dataset(data.shifted_pool, *ensemble);
      auto [filtered, stats] = filter_by_variance(labeled);
      double drop_fraction = static_cast<double>(stats.dropped) /
                             static_cast<double>(labeled.size());

      size_t cap = std::min(config.shifted_train_cap, filtered.size());
      auto unfiltered_sub = size_subsets(labeled, {cap}, base_seed + 23);
      auto filtered_sub = size_subsets(filtered, {cap}, base_seed + 23);
      std::vector<double> r_unf, r_fil;
      for (int s = 0; s < config.seeds; ++s) {
        log_line(log, "shifted-domain training: seed " + std::to_string(s));
        r_unf.push_back(train_and_eval(unfiltered_sub[0], data.val, data.test,
                                       data.test_truth, mc, tc,
                                       base_seed + 200 + s)
                            .pearson.value_or(0.0));
        r_fil.push_back(train_and_eval(filtered_sub[0], data.val, data.test,
                                       data.test_truth, mc, tc,
                                       base_seed + 200 + s)
                            .pearson.value_or(0.0));
      }
      double delta = mean_of(r_fil) - mean_of(r_unf);
      add(threshold_row("filter_noninferiority",
                        "mean Pearson, filtered minus unfiltered "
                        "(shifted pool)",
                        delta, -0.02, ">="));
      FindingRow drop{"filter_drop_fraction",
                      "fraction dropped by the one-sided variance rule",
                      drop_fraction,
                      0.0,
                      "in[0.05,0.40]",
                      drop_fraction >= 0.05 && drop_fraction <= 0.40
                          ? "pass"
                          : "fail"};
      add(std::move(drop));
      FindingRow info{"shifted_unfiltered_pearson",
                      "mean Pearson of students trained on the shifted pool",
                      mean_of(r_unf),
                      0.0,
                      "info",
                      "info"};
      add(std::move(info));
    }
  }

  if (!config.outdir.empty()) {
    write_findings_csv(report, config.outdir + "/findings.csv");
  }
  return report;
}

void write_findings_csv(const FindingsReport& report,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "claim,detail,measured,comparator,threshold,status\n";
  for (const FindingRow& row : report.rows) {
    out << row.id << ",\"" << row.detail << "\","
        << format_double(row.measured) << "," << row.comparator << ","
        << format_double(row.threshold) << "," << row.status << "\n";
  }
}

ModelConfig reference_full_scale_config() {
  ModelConfig c;
  c.vocab_size = 30002;
  c.embedding_dim = 300;
  c.hidden_dim = 50;
  c.max_len = 70;
  return c.resolved();
}

EfficiencyReport efficiency_report(const ModelConfig& config,
                                   const ModelParams& params,
                                   int tokens_per_side, int runs) {
  ModelConfig mc = config.resolved();
  EfficiencyReport rep;
  rep.parameter_count = parameter_count(mc);
  rep.reference_parameter_count = parameter_count(reference_full_scale_config());
  rep.tokens_per_side = tokens_per_side;

  int len = std::min(tokens_per_side, mc.max_len);
  Rng rng(7);
  Encoded src, mt;
  src.ids.assign(static_cast<size_t>(mc.max_len), 0);
  src.mask.assign(static_cast<size_t>(mc.max_len), 0);
  for (int i = 0; i < len; ++i) {
    src.ids[i] = static_cast<int>(rng.bounded(mc.vocab_size));
    src.mask[i] = 1;
  }
  src.length = len;
  mt = src;
  for (int i = 0; i < len; ++i) {
    mt.ids[i] = static_cast<int>(rng.bounded(mc.vocab_size));
  }

  // Warm-up, then median of timed runs.
  double sink = 0.0;
  for (int i = 0; i < 3; ++i) sink += predict(mc, params, src, mt);
  std::vector<double> times;
  times.reserve(static_cast<size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    sink += predict(mc, params, src, mt);
    auto t1 = std::chrono::steady_clock::now();
    times.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  rep.latency_ms = times[times.size() / 2];
  if (!std::isfinite(sink)) throw NumericError("efficiency: non-finite sum");
  return rep;
}

void print_efficiency(const EfficiencyReport& report, std::ostream& out) {
  out << "parameters (this config):      " << report.parameter_count << "\n";
  out << "parameters (full-scale dims):  " << report.reference_parameter_count
      << "  (30k vocabulary, 300-d embeddings, hidden 50)\n";
  out << "inference latency:             " << report.latency_ms
      << " ms per " << report.tokens_per_side
      << "-token pair (median, single thread)\n";
}

}  // namespace qed
