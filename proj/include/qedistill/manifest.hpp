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

#ifndef QEDISTILL_MANIFEST_HPP_
#define QEDISTILL_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qed {

// Flat key=value provenance record written next to every output artifact.
// Values never contain newlines; keys keep insertion order so reruns emit
// identical bytes.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int64_t value);
  void set(const std::string& key, uint64_t value);
  void merge(const Manifest& other);
  void write(const std::string& path) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// 64-bit content hash of a file, as fixed-width hex.
std::string file_hash_hex(const std::string& path);

}  // namespace qed

#endif  // QEDISTILL_MANIFEST_HPP_
