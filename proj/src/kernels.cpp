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

#include "qedistill/kernels.hpp"

#include <cmath>
#include <limits>

#include "qedistill/parallel.hpp"

namespace qed::kern {

namespace {
// Below this many multiply-adds a parallel region costs more than it saves.
constexpr int64_t kGemmGrain = 1 << 15;
constexpr int64_t kElemGrain = 1 << 14;

inline double dot_strided(const double* a, int sa, const double* b, int sb,
                          int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    s += a[static_cast<size_t>(i) * sa] * b[static_cast<size_t>(i) * sb];
  }
  return s;
}
}  // namespace

void gemm(double* c, const double* a, const double* b, int m, int n, int k,
          bool ta, bool tb, bool accumulate) {
  // Row/column strides of op(a) and op(b) in their backing arrays.
  const int a_rs = ta ? 1 : k;  // step between op(a) rows
  const int a_ks = ta ? m : 1;  // step along the k axis
  const int b_ks = tb ? 1 : n;
  const int b_cs = tb ? k : 1;
  const int64_t work = static_cast<int64_t>(m) * n * k;
  auto row = [&](int64_t i) {
    const double* ai = a + static_cast<size_t>(i) * a_rs;
    double* ci = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      double s = dot_strided(ai, a_ks, b + static_cast<size_t>(j) * b_cs,
                             b_ks, k);
      if (accumulate) {
        ci[j] += s;
      } else {
        ci[j] = s;
      }
    }
  };
  if (work >= kGemmGrain) {
    parallel_for(m, row);
  } else {
    for (int i = 0; i < m; ++i) row(i);
  }
}

void add(double* c, const double* a, const double* b, size_t n) {
  if (static_cast<int64_t>(n) >= kElemGrain) {
    parallel_for(static_cast<int64_t>(n),
                 [&](int64_t i) { c[i] = a[i] + b[i]; });
  } else {
    for (size_t i = 0; i < n; ++i) c[i] = a[i] + b[i];
  }
}

void mul(double* c, const double* a, const double* b, size_t n) {
  if (static_cast<int64_t>(n) >= kElemGrain) {
    parallel_for(static_cast<int64_t>(n),
                 [&](int64_t i) { c[i] = a[i] * b[i]; });
  } else {
    for (size_t i = 0; i < n; ++i) c[i] = a[i] * b[i];
  }
}

void add_bias_rows(double* c, const double* a, const double* bias, int rows,
                   int cols) {
  for (int r = 0; r < rows; ++r) {
    const double* ar = a + static_cast<size_t>(r) * cols;
    double* cr = c + static_cast<size_t>(r) * cols;
    for (int j = 0; j < cols; ++j) cr[j] = ar[j] + bias[j];
  }
}

void tanh_v(double* out, const double* x, size_t n) {
  if (static_cast<int64_t>(n) >= kElemGrain) {
    parallel_for(static_cast<int64_t>(n),
                 [&](int64_t i) { out[i] = std::tanh(x[i]); });
  } else {
    for (size_t i = 0; i < n; ++i) out[i] = std::tanh(x[i]);
  }
}

void sigmoid_v(double* out, const double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    // Evaluate on the non-overflowing branch for either sign.
    double z = x[i];
    if (z >= 0) {
      out[i] = 1.0 / (1.0 + std::exp(-z));
    } else {
      double e = std::exp(z);
      out[i] = e / (1.0 + e);
    }
  }
}

void acc(double* y, const double* x, size_t n) {
  if (static_cast<int64_t>(n) >= kElemGrain) {
    parallel_for(static_cast<int64_t>(n), [&](int64_t i) { y[i] += x[i]; });
  } else {
    for (size_t i = 0; i < n; ++i) y[i] += x[i];
  }
}

void acc_scaled(double* y, const double* x, double alpha, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void acc_prod(double* y, const double* x, const double* z, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += x[i] * z[i];
}

void gather_rows(double* out, const double* table, const int* idx, int nidx,
                 int cols) {
  for (int r = 0; r < nidx; ++r) {
    const double* src = table + static_cast<size_t>(idx[r]) * cols;
    double* dst = out + static_cast<size_t>(r) * cols;
    for (int j = 0; j < cols; ++j) dst[j] = src[j];
  }
}

void scatter_rows_add(double* table, const double* rows, const int* idx,
                      int nidx, int cols) {
  // Parallel over columns keeps the per-element accumulation order equal to
  // the serial r-ascending order even when indices collide.
  if (static_cast<int64_t>(nidx) * cols >= kElemGrain && cols > 1) {
    parallel_for(cols, [&](int64_t j) {
      for (int r = 0; r < nidx; ++r) {
        table[static_cast<size_t>(idx[r]) * cols + j] +=
            rows[static_cast<size_t>(r) * cols + j];
      }
    });
    return;
  }
  for (int r = 0; r < nidx; ++r) {
    double* dst = table + static_cast<size_t>(idx[r]) * cols;
    const double* src = rows + static_cast<size_t>(r) * cols;
    for (int j = 0; j < cols; ++j) dst[j] += src[j];
  }
}

bool softmax_masked(double* out, const double* x, const uint8_t* mask, int n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (mask[i] && x[i] > mx) mx = x[i];
  }
  if (mx == -std::numeric_limits<double>::infinity()) return false;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (mask[i]) {
      out[i] = std::exp(x[i] - mx);
      sum += out[i];
    } else {
      out[i] = 0.0;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (mask[i]) out[i] /= sum;
  }
  return true;
}

void adam_update(double* p, double* m, double* v, const double* g, size_t n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2) {
  auto upd = [&](int64_t i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    double mhat = m[i] / bias1;
    double vhat = v[i] / bias2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  };
  if (static_cast<int64_t>(n) >= kElemGrain) {
    parallel_for(static_cast<int64_t>(n), upd);
  } else {
    for (size_t i = 0; i < n; ++i) upd(static_cast<int64_t>(i));
  }
}

}  // namespace qed::kern
