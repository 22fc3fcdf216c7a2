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

#ifndef QEDISTILL_REFERENCE_KERNELS_HPP_
#define QEDISTILL_REFERENCE_KERNELS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

// Plain serial kernels that define the numeric semantics. The production
// kernels in kernels.cpp must match these bit for bit at any thread count;
// tests and the bench_kernels tool compare the two.

namespace qed::ref {

inline void gemm(double* c, const double* a, const double* b, int m, int n,
                 int k, bool ta, bool tb, bool accumulate) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int p = 0; p < k; ++p) {
        double av = ta ? a[static_cast<size_t>(p) * m + i]
                       : a[static_cast<size_t>(i) * k + p];
        double bv = tb ? b[static_cast<size_t>(j) * k + p]
                       : b[static_cast<size_t>(p) * n + j];
        s += av * bv;
      }
      double* slot = c + static_cast<size_t>(i) * n + j;
      *slot = accumulate ? *slot + s : s;
    }
  }
}

inline void add(double* c, const double* a, const double* b, size_t n) {
  for (size_t i = 0; i < n; ++i) c[i] = a[i] + b[i];
}

inline void mul(double* c, const double* a, const double* b, size_t n) {
  for (size_t i = 0; i < n; ++i) c[i] = a[i] * b[i];
}

inline void tanh_v(double* out, const double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = std::tanh(x[i]);
}

inline void scatter_rows_add(double* table, const double* rows,
                             const int* idx, int nidx, int cols) {
  for (int r = 0; r < nidx; ++r) {
    for (int j = 0; j < cols; ++j) {
      table[static_cast<size_t>(idx[r]) * cols + j] +=
          rows[static_cast<size_t>(r) * cols + j];
    }
  }
}

inline bool softmax_masked(double* out, const double* x, const uint8_t* mask,
                           int n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (mask[i] && x[i] > mx) mx = x[i];
  }
  if (mx == -std::numeric_limits<double>::infinity()) return false;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = mask[i] ? std::exp(x[i] - mx) : 0.0;
    if (mask[i]) sum += out[i];
  }
  for (int i = 0; i < n; ++i) {
    if (mask[i]) out[i] /= sum;
  }
  return true;
}

inline void adam_update(double* p, double* m, double* v, const double* g,
                        size_t n, double lr, double beta1, double beta2,
                        double eps, double bias1, double bias2) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + eps);
  }
}

}  // namespace qed::ref

#endif  // QEDISTILL_REFERENCE_KERNELS_HPP_
