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

#include "qedistill/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "qedistill/errors.hpp"

namespace qed {

namespace {

double eval_loss(std::vector<Tensor>& params, const LossBuilder& build,
                 const std::string& context) {
  Tape tape;
  std::vector<int> ids;
  ids.reserve(params.size());
  for (Tensor& p : params) ids.push_back(tape.leaf_ref(&p, true));
  int loss = build(tape, ids);
  double value = tape.value(loss).v[0];
  if (!std::isfinite(value)) {
    throw NumericError("gradient_check: non-finite loss " + context);
  }
  return value;
}

}  // namespace

GradCheckReport gradient_check(std::vector<Tensor>& params,
                               const std::vector<std::string>& names,
                               const LossBuilder& build_loss, double tolerance,
                               double h, int max_samples_per_param) {
  if (params.size() != names.size()) {
    throw ContractError("gradient_check: params/names size mismatch");
  }
  GradCheckReport report;
  report.tolerance = tolerance;
  report.h = h;

  // Analytic gradients at the base point.
  Tape tape;
  std::vector<int> ids;
  for (Tensor& p : params) ids.push_back(tape.leaf_ref(&p, true));
  int loss = build_loss(tape, ids);
  if (!std::isfinite(tape.value(loss).v[0])) {
    throw NumericError("gradient_check: non-finite loss at base point");
  }
  tape.backward(loss);
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (int id : ids) analytic.push_back(tape.grad(id));

  for (size_t pi = 0; pi < params.size(); ++pi) {
    GradCheckGroup group;
    group.name = names[pi];
    size_t n = params[pi].numel();
    size_t samples = std::min<size_t>(n, static_cast<size_t>(
                                             std::max(1, max_samples_per_param)));
    for (size_t s = 0; s < samples; ++s) {
      size_t idx = s * n / samples;  // evenly spread over the array
      double saved = params[pi].v[idx];
      params[pi].v[idx] = saved + h;
      double up = eval_loss(params, build_loss,
                            "at " + names[pi] + "[" + std::to_string(idx) +
                                "] + h");
      params[pi].v[idx] = saved - h;
      double down = eval_loss(params, build_loss,
                              "at " + names[pi] + "[" + std::to_string(idx) +
                                  "] - h");
      params[pi].v[idx] = saved;
      double numeric = (up - down) / (2.0 * h);
      double exact = analytic[pi].v[idx];
      double rel = std::fabs(exact - numeric) /
                   std::max(1.0, std::fabs(exact) + std::fabs(numeric));
      group.max_rel_err = std::max(group.max_rel_err, rel);
      ++group.checked;
    }
    report.max_rel_err = std::max(report.max_rel_err, group.max_rel_err);
    report.groups.push_back(std::move(group));
  }
  report.pass = report.max_rel_err < tolerance;
  return report;
}

}  // namespace qed
