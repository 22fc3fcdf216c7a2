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

#ifndef QEDISTILL_MODEL_IO_HPP_
#define QEDISTILL_MODEL_IO_HPP_

#include <string>

#include "qedistill/model.hpp"
#include "qedistill/vocab.hpp"

namespace qed {

// A trained model together with everything needed to run it.
struct Model {
  ModelConfig config;
  Vocabulary src_vocab;
  Vocabulary mt_vocab;
  ModelParams params;

  Encoded encode_source(const std::string& text) const;
  Encoded encode_mt(const std::string& text) const;
  double predict_pair(const std::string& source, const std::string& mt) const;
};

// Single-file container: magic "BQE1", version byte, config, both
// vocabularies, then the parameter arrays as little-endian 64-bit floats.
// load(save(x)) is bitwise identical.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace qed

#endif  // QEDISTILL_MODEL_IO_HPP_
