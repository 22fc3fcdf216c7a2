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

#include "qedistill/adam.hpp"

#include <cmath>

#include "qedistill/kernels.hpp"

namespace qed {

AdamState AdamState::init(std::span<const Tensor* const> params,
                          double learning_rate, double beta1, double beta2,
                          double epsilon) {
  AdamState s;
  s.learning_rate = learning_rate;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  s.m.reserve(params.size());
  s.v.reserve(params.size());
  for (const Tensor* p : params) {
    s.m.emplace_back(Tensor(p->shape));
    s.v.emplace_back(Tensor(p->shape));
  }
  return s;
}

void adam_step(std::span<Tensor* const> params,
               std::span<const Tensor* const> gradients, AdamState& state) {
  if (params.size() != gradients.size() || params.size() != state.m.size()) {
    throw DimensionError("adam_step: parameter/gradient/state counts differ");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*gradients[i]) ||
        !params[i]->same_shape(state.m[i])) {
      throw DimensionError("adam_step: shape mismatch at parameter " +
                           std::to_string(i) + ": param " +
                           params[i]->shape_str() + ", grad " +
                           gradients[i]->shape_str() + ", moment " +
                           state.m[i].shape_str());
    }
  }
  state.step += 1;
  const double bias1 = 1.0 - std::pow(state.beta1, state.step);
  const double bias2 = 1.0 - std::pow(state.beta2, state.step);
  for (size_t i = 0; i < params.size(); ++i) {
    kern::adam_update(params[i]->v.data(), state.m[i].v.data(),
                      state.v[i].v.data(), gradients[i]->v.data(),
                      params[i]->numel(), state.learning_rate, state.beta1,
                      state.beta2, state.epsilon, bias1, bias2);
  }
}

}  // namespace qed
