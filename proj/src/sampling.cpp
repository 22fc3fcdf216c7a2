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

#include "qedistill/sampling.hpp"

#include <algorithm>
#include <unordered_set>

#include "qedistill/errors.hpp"

namespace qed {

std::vector<std::string> sample_corpus(const std::vector<Document>& documents,
                                       const LangPredicate& langid,
                                       size_t min_chars, size_t max_chars,
                                       int top_docs) {
  if (top_docs < 1) throw ConfigError("sample_corpus: top_docs must be >= 1");
  struct Qualified {
    const Document* doc;
    std::vector<const std::string*> sentences;
  };
  std::vector<Qualified> qualified;
  qualified.reserve(documents.size());
  for (const Document& doc : documents) {
    Qualified q{&doc, {}};
    for (const std::string& s : doc.sentences) {
      size_t len = utf8_length(s);
      if (len < min_chars || len > max_chars) continue;
      if (langid && !langid(s)) continue;
      q.sentences.push_back(&s);
    }
    qualified.push_back(std::move(q));
  }
  std::sort(qualified.begin(), qualified.end(),
            [](const Qualified& a, const Qualified& b) {
              if (a.sentences.size() != b.sentences.size()) {
                return a.sentences.size() > b.sentences.size();
              }
              return a.doc->id < b.doc->id;
            });
  if (static_cast<size_t>(top_docs) < qualified.size()) {
    qualified.resize(top_docs);
  }
  std::vector<std::string> pool;
  for (const Qualified& q : qualified) {
    for (const std::string* s : q.sentences) pool.push_back(*s);
  }
  return pool;
}

namespace {
std::string pair_key(const Example& ex) {
  return join_tokens(ex.source_tokens()) + "\x1f" +
         join_tokens(ex.mt_tokens());
}
}  // namespace

Dataset exclude_overlap(const Dataset& pool,
                        std::span<const Dataset* const> forbidden) {
  std::unordered_set<std::string> keys;
  for (const Dataset* ds : forbidden) {
    for (const Example& ex : ds->examples) keys.insert(pair_key(ex));
  }
  Dataset out;
  out.name = pool.name;
  out.domain = pool.domain;
  out.provenance = pool.provenance;
  for (const Example& ex : pool.examples) {
    if (!keys.count(pair_key(ex))) out.examples.push_back(ex);
  }
  return out;
}

}  // namespace qed
