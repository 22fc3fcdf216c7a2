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

#ifndef QEDISTILL_MODEL_HPP_
#define QEDISTILL_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "qedistill/tape.hpp"
#include "qedistill/tensor.hpp"
#include "qedistill/vocab.hpp"

namespace qed {

// Sentence-pair regressor: each side is embedded, encoded by a bidirectional
// gated recurrent network, and pooled by additive attention over the encoder
// states; the two pooled vectors feed a sigmoid output unit.
struct ModelConfig {
  int vocab_size = 0;
  int embedding_dim = 300;
  int hidden_dim = 50;       // per direction
  int max_len = 70;          // tokens per sentence
  int attention_dim = 0;     // 0 -> 2 * hidden_dim

  ModelConfig resolved() const;
  void validate() const;
};

enum class Side : uint8_t { kSource = 0, kMt = 1 };

// Gate order is update (z), reset (r), candidate (n).
struct GruCell {
  Tensor wxz, whz, bz;
  Tensor wxr, whr, br;
  Tensor wxn, whn, bn;
};

struct SideParams {
  Tensor embeddings;   // vocab x embedding_dim
  GruCell dir[2];      // forward, backward
  Tensor att_w;        // 2*hidden x attention_dim
  Tensor att_v;        // attention_dim x 1
};

struct ModelParams {
  SideParams side[2];  // source, mt
  Tensor out_w;        // 4*hidden x 1
  Tensor out_b;        // 1 x 1

  // Canonical flat views; ordering is frozen and shared by the optimizer,
  // the gradient checker, and the container format.
  std::vector<Tensor*> list();
  std::vector<const Tensor*> list() const;
  static std::vector<std::string> names();
};

// Glorot-uniform matrices, zero biases; identical output for equal seeds.
ModelParams init_params(const ModelConfig& config, uint64_t seed);

// Number of trainable scalars as a closed-form function of the config.
int64_t parameter_count(const ModelConfig& config);

// Node ids of all parameter leaves bound onto a tape (list() order).
struct BoundModel {
  const ModelConfig* config;
  std::vector<int> params;  // node ids, list() order
  int neg_ones_h;           // constant -1 row used by the recurrent blend

  int param(int flat_index) const { return params[flat_index]; }
};

BoundModel bind_model(Tape& tape, const ModelConfig& config,
                      const ModelParams& params);
// Binds pre-created parameter leaf nodes (used by the gradient checker).
BoundModel bind_model_nodes(Tape& tape, const ModelConfig& config,
                            std::vector<int> param_nodes);

// Forward graph for one sentence: returns the node holding the length x
// 2*hidden matrix of encoder states for the first `length` positions.
int build_encoder(Tape& tape, const BoundModel& model, Side side,
                  const std::vector<int>& ids, int length);
// Attention pooling over encoder states -> 2*hidden x 1 sentence vector.
int build_attention(Tape& tape, const BoundModel& model, Side side,
                    int states, int length);
// Full pair graph -> scalar prediction node (sigmoid output).
int build_prediction(Tape& tape, const BoundModel& model,
                     const Encoded& source, const Encoded& mt);

// --- plain (tape-free) inference API ---

// Encoder states padded with zero rows up to max_len (masked positions carry
// no signal; attention gives them exactly zero weight).
Tensor encode_sentence(const std::vector<int>& ids,
                       const std::vector<uint8_t>& mask, Side side,
                       const ModelConfig& config, const ModelParams& params);

struct AttentionResult {
  Tensor sentence;              // 2*hidden x 1
  std::vector<double> weights;  // per position, zeros where masked
};

AttentionResult attention_pool(const Tensor& states,
                               const std::vector<uint8_t>& mask, Side side,
                               const ModelConfig& config,
                               const ModelParams& params);

// Quality estimate in (0, 1). Pure; safe to call concurrently on shared
// params.
double predict(const ModelConfig& config, const ModelParams& params,
               const Encoded& source, const Encoded& mt);

}  // namespace qed

#endif  // QEDISTILL_MODEL_HPP_
