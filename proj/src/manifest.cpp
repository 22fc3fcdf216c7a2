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

#include "qedistill/manifest.hpp"

#include <fstream>

#include "qedistill/dataset.hpp"
#include "qedistill/errors.hpp"
#include "qedistill/rng.hpp"

namespace qed {

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}
void Manifest::set(const std::string& key, double value) {
  set(key, format_double(value));
}
void Manifest::set(const std::string& key, int64_t value) {
  set(key, std::to_string(value));
}
void Manifest::set(const std::string& key, uint64_t value) {
  set(key, std::to_string(value));
}

void Manifest::merge(const Manifest& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

void Manifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  if (!out) throw IoError("failed writing " + path);
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for hashing");
  char buf[1 << 16];
  uint64_t h = 1469598103934665603ull;
  while (in) {
    in.read(buf, sizeof(buf));
    h = fnv1a64(buf, static_cast<size_t>(in.gcount()), h);
  }
  char hex[17];
  snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

}  // namespace qed
