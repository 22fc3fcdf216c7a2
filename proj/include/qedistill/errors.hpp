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

#ifndef QEDISTILL_ERRORS_HPP_
#define QEDISTILL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qed {

// Every failure surfaced by the library carries a short machine-parsable
// category; the CLI prints "error: <category>: <message>" and exits 1.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

#define QED_DEFINE_ERROR(NAME, CATEGORY)                  \
  class NAME : public Error {                             \
   public:                                                \
    explicit NAME(const std::string& message)             \
        : Error(CATEGORY, message) {}                     \
  }

QED_DEFINE_ERROR(DimensionError, "dimension");  // tensor shapes disagree
QED_DEFINE_ERROR(IndexError, "index");          // gather/vocab id out of range
QED_DEFINE_ERROR(ContractError, "contract");    // precondition violated
QED_DEFINE_ERROR(ParseError, "parse");          // malformed input file
QED_DEFINE_ERROR(RangeError, "range");          // numeric value out of range
QED_DEFINE_ERROR(ConfigError, "config");        // bad configuration value
QED_DEFINE_ERROR(NumericError, "numeric");      // non-finite value encountered
QED_DEFINE_ERROR(FormatError, "format");        // bad binary container
QED_DEFINE_ERROR(LookupError, "lookup");        // missing prediction-table key
QED_DEFINE_ERROR(MetricError, "metric");        // metric undefined on input
QED_DEFINE_ERROR(IoError, "io");                // file open/write failure

#undef QED_DEFINE_ERROR

}  // namespace qed

#endif  // QEDISTILL_ERRORS_HPP_
