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

#include "qedistill/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qedistill/errors.hpp"

namespace qed {

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::kGold: return "gold";
    case Origin::kDistilled: return "distilled";
    case Origin::kAugmented: return "augmented";
  }
  return "?";
}

double normalize_score(double raw, long line) {
  if (!(raw >= 0.0 && raw <= 100.0)) {
    std::ostringstream os;
    os << "score " << raw << " outside [0, 100]";
    if (line >= 1) os << " at line " << line;
    throw RangeError(os.str());
  }
  return raw / 100.0;
}

double denormalize_score(double normalized) { return normalized * 100.0; }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view field, const std::string& what,
                    long line) {
  double value = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line) + ": non-numeric " +
                     what + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

Dataset read_pairs(const std::string& path, TsvOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Dataset ds;
  ds.name = path;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (options.has_header && lineno == 1) continue;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    auto fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 4) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": got " +
                       std::to_string(fields.size()) +
                       " column(s), want 2-4");
    }
    Example ex;
    ex.source = std::string(trim(fields[0]));
    ex.mt = std::string(trim(fields[1]));
    if (fields.size() >= 3) {
      double raw = parse_double(fields[2], "score", lineno);
      ex.label = normalize_score(raw, lineno);
    }
    if (fields.size() == 4) {
      double var = parse_double(fields[3], "variance", lineno);
      if (var < 0.0) {
        throw ParseError(path + " line " + std::to_string(lineno) +
                         ": negative variance");
      }
      ex.variance = var;
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

void write_pairs(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const Example& ex : dataset.examples) {
    out << ex.source << '\t' << ex.mt;
    if (ex.label) {
      out << '\t' << format_double(denormalize_score(*ex.label));
      if (ex.variance) out << '\t' << format_double(*ex.variance);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace qed
