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

#ifndef QEDISTILL_PARALLEL_HPP_
#define QEDISTILL_PARALLEL_HPP_

#include <cstdint>

namespace qed {

// Process-wide thread count, default 1. Results are identical for any value:
// parallel loops only ever partition index ranges whose per-index work is
// independent, and reductions are performed afterwards in index order.
void set_threads(int n);
int threads();

// Runs f(i) for i in [0, n). Parallel when threads() > 1 and the loop is
// worth it; otherwise a plain serial loop.
template <typename F>
void parallel_for(int64_t n, F&& f);

namespace detail {
bool parallel_enabled(int64_t n);
}

}  // namespace qed

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qed {

template <typename F>
void parallel_for(int64_t n, F&& f) {
#ifdef _OPENMP
  if (detail::parallel_enabled(n)) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
      f(i);
    }
    return;
  }
#endif
  for (int64_t i = 0; i < n; ++i) {
    f(i);
  }
}

}  // namespace qed

#endif  // QEDISTILL_PARALLEL_HPP_
