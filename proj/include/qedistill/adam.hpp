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

#ifndef QEDISTILL_ADAM_HPP_
#define QEDISTILL_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "qedistill/tensor.hpp"

namespace qed {

// Adam with bias correction. The moment arrays mirror the parameter arrays
// one to one; step counts updates applied so far.
struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int64_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;

  static AdamState init(std::span<const Tensor* const> params,
                        double learning_rate = 1e-3, double beta1 = 0.9,
                        double beta2 = 0.999, double epsilon = 1e-8);
};

// In-place update of every parameter array from its gradient.
void adam_step(std::span<Tensor* const> params,
               std::span<const Tensor* const> gradients, AdamState& state);

}  // namespace qed

#endif  // QEDISTILL_ADAM_HPP_
