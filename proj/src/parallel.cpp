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

#include "qedistill/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qed {

namespace {
int g_threads = 1;
}

void set_threads(int n) {
  if (n < 1) n = 1;
  g_threads = n;
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

int threads() { return g_threads; }

namespace detail {
bool parallel_enabled(int64_t n) { return g_threads > 1 && n > 1; }
}  // namespace detail

}  // namespace qed
