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

#ifndef QEDISTILL_TENSOR_HPP_
#define QEDISTILL_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qedistill/errors.hpp"

namespace qed {

// Dense row-major tensor of 64-bit floats. All model math is 64-bit: the
// gradient checks and byte-identical reruns this project promises need the
// extra precision more than they need speed.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int rows, int cols)
      : shape{rows, cols},
        v(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0.0) {}
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    size_t n = 1;
    for (int d : shape) {
      if (d <= 0) throw DimensionError("tensor: non-positive dimension");
      n *= static_cast<size_t>(d);
    }
    v.assign(n, 0.0);
  }

  static Tensor row(std::vector<double> values) {
    Tensor t;
    t.shape = {1, static_cast<int>(values.size())};
    t.v = std::move(values);
    return t;
  }
  static Tensor col(std::vector<double> values) {
    Tensor t;
    t.shape = {static_cast<int>(values.size()), 1};
    t.v = std::move(values);
    return t;
  }
  static Tensor scalar(double x) {
    Tensor t;
    t.shape = {1, 1};
    t.v = {x};
    return t;
  }

  size_t numel() const { return v.size(); }
  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols() + c]; }
  double at(int r, int c) const {
    return v[static_cast<size_t>(r) * cols() + c];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  std::string shape_str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape.size(); ++i) {
      if (i) os << " x ";
      os << shape[i];
    }
    os << "]";
    return os.str();
  }
};

}  // namespace qed

#endif  // QEDISTILL_TENSOR_HPP_
