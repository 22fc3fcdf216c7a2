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

#ifndef QEDISTILL_KERNELS_HPP_
#define QEDISTILL_KERNELS_HPP_

#include <cstddef>
#include <cstdint>

namespace qed::kern {

// Production kernels. OpenMP-parallel where the work justifies it, and
// bit-identical to the serial reference in reference_kernels.hpp for any
// thread count: parallel loops split output elements across threads while
// each element keeps the reference accumulation order (ascending k).

// c = op(a) * op(b), with op(a) m-by-k and op(b) k-by-n.
// a is stored m-by-k (ta == false) or k-by-m (ta == true); b likewise.
// accumulate == true adds into c instead of overwriting.
void gemm(double* c, const double* a, const double* b, int m, int n, int k,
          bool ta, bool tb, bool accumulate);

void add(double* c, const double* a, const double* b, size_t n);
void mul(double* c, const double* a, const double* b, size_t n);
// c = a + bias broadcast over rows; a and c are rows-by-cols.
void add_bias_rows(double* c, const double* a, const double* bias, int rows,
                   int cols);
void tanh_v(double* out, const double* x, size_t n);
void sigmoid_v(double* out, const double* x, size_t n);

// y += x, y += alpha * x
void acc(double* y, const double* x, size_t n);
void acc_scaled(double* y, const double* x, double alpha, size_t n);
// y += x ⊙ z (elementwise product), used by mul/tanh/sigmoid backward.
void acc_prod(double* y, const double* x, const double* z, size_t n);

// out[r] = table[idx[r]] for r in [0, nidx); each row has `cols` entries.
void gather_rows(double* out, const double* table, const int* idx, int nidx,
                 int cols);
// table[idx[r]] += rows[r]; duplicate indices accumulate in ascending r.
void scatter_rows_add(double* table, const double* rows, const int* idx,
                      int nidx, int cols);

// Max-subtracted softmax over the unmasked entries; masked outputs are
// exactly zero. Returns false when every position is masked.
bool softmax_masked(double* out, const double* x, const uint8_t* mask, int n);

// One Adam update over a parameter array. step_lr et al. are the
// bias-corrected per-step scalars computed by the caller.
void adam_update(double* p, double* m, double* v, const double* g, size_t n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2);

}  // namespace qed::kern

#endif  // QEDISTILL_KERNELS_HPP_
