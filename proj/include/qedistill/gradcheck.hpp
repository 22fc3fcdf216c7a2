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

#ifndef QEDISTILL_GRADCHECK_HPP_
#define QEDISTILL_GRADCHECK_HPP_

#include <functional>
#include <string>
#include <vector>

#include "qedistill/tape.hpp"
#include "qedistill/tensor.hpp"

namespace qed {

// Builds the loss on the given tape. The checker binds each entry of the
// parameter list as a parameter leaf (aliasing the caller's storage, in
// order) and passes the resulting node ids.
using LossBuilder =
    std::function<int(Tape& tape, const std::vector<int>& param_nodes)>;

struct GradCheckGroup {
  std::string name;
  double max_rel_err = 0.0;
  int checked = 0;
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  double h = 0.0;
  bool pass = false;
};

// Compares analytic gradients against central finite differences.
// Per sampled scalar the error is |analytic - numeric| divided by
// max(1, |analytic| + |numeric|). Throws NumericError (naming the parameter)
// if the loss goes non-finite; a failing tolerance only flips `pass`.
GradCheckReport gradient_check(std::vector<Tensor>& params,
                               const std::vector<std::string>& names,
                               const LossBuilder& build_loss,
                               double tolerance, double h = 1e-3,
                               int max_samples_per_param = 24);

}  // namespace qed

#endif  // QEDISTILL_GRADCHECK_HPP_
