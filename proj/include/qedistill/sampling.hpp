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

#ifndef QEDISTILL_SAMPLING_HPP_
#define QEDISTILL_SAMPLING_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qedistill/dataset.hpp"

namespace qed {

struct Document {
  std::string id;
  std::vector<std::string> sentences;
};

// Accepts or rejects a sentence by language. The default accepts everything;
// production callers plug in a real classifier.
using LangPredicate = std::function<bool(std::string_view)>;

// Keeps, per document, the sentences that pass the language predicate and
// whose length in code points is within [min_chars, max_chars] inclusive.
// Selects the top_docs documents with the most qualifying sentences (ties by
// ascending document id) and returns their qualifying sentences in document
// order.
std::vector<std::string> sample_corpus(const std::vector<Document>& documents,
                                       const LangPredicate& langid,
                                       size_t min_chars, size_t max_chars,
                                       int top_docs);

// Drops pool examples whose (source, mt) pair appears in any forbidden set.
// Pairs are compared after tokenization and lowercasing.
Dataset exclude_overlap(const Dataset& pool,
                        std::span<const Dataset* const> forbidden);

}  // namespace qed

#endif  // QEDISTILL_SAMPLING_HPP_
