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

#include "qedistill/model.hpp"

#include <algorithm>
#include <cmath>

#include "qedistill/rng.hpp"

namespace qed {

ModelConfig ModelConfig::resolved() const {
  ModelConfig c = *this;
  if (c.attention_dim == 0) c.attention_dim = 2 * c.hidden_dim;
  return c;
}

void ModelConfig::validate() const {
  ModelConfig c = resolved();
  if (c.vocab_size < 1 || c.embedding_dim < 1 || c.hidden_dim < 1 ||
      c.max_len < 1 || c.attention_dim < 1) {
    throw ConfigError("model config: all dimensions must be >= 1");
  }
}

std::vector<Tensor*> ModelParams::list() {
  std::vector<Tensor*> out;
  out.reserve(44);
  out.push_back(&side[0].embeddings);
  out.push_back(&side[1].embeddings);
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 2; ++d) {
      GruCell& g = side[s].dir[d];
      for (Tensor* t : {&g.wxz, &g.whz, &g.bz, &g.wxr, &g.whr, &g.br, &g.wxn,
                        &g.whn, &g.bn}) {
        out.push_back(t);
      }
    }
  }
  for (int s = 0; s < 2; ++s) {
    out.push_back(&side[s].att_w);
    out.push_back(&side[s].att_v);
  }
  out.push_back(&out_w);
  out.push_back(&out_b);
  return out;
}

std::vector<const Tensor*> ModelParams::list() const {
  auto mut = const_cast<ModelParams*>(this)->list();
  return std::vector<const Tensor*>(mut.begin(), mut.end());
}

std::vector<std::string> ModelParams::names() {
  std::vector<std::string> out;
  out.push_back("src_embeddings");
  out.push_back("mt_embeddings");
  const char* sides[] = {"src", "mt"};
  const char* dirs[] = {"fwd", "bwd"};
  const char* gates[] = {"wxz", "whz", "bz", "wxr", "whr", "br",
                         "wxn", "whn", "bn"};
  for (const char* s : sides) {
    for (const char* d : dirs) {
      for (const char* g : gates) {
        out.push_back(std::string(s) + "_" + d + "_" + g);
      }
    }
  }
  for (const char* s : sides) {
    out.push_back(std::string(s) + "_att_w");
    out.push_back(std::string(s) + "_att_v");
  }
  out.push_back("out_w");
  out.push_back("out_b");
  return out;
}

namespace {

void glorot_fill(Tensor& t, Rng& rng) {
  double s = std::sqrt(6.0 / (t.rows() + t.cols()));
  for (double& x : t.v) x = rng.uniform(-s, s);
}

bool is_bias(const std::string& name) {
  if (name == "out_b") return true;
  if (name.size() < 3) return false;
  auto tail = name.substr(name.size() - 3);
  return tail == "_bz" || tail == "_br" || tail == "_bn";
}

}  // namespace

ModelParams init_params(const ModelConfig& config, uint64_t seed) {
  ModelConfig c = config.resolved();
  c.validate();
  const int e = c.embedding_dim, h = c.hidden_dim, a = c.attention_dim;
  ModelParams p;
  for (int s = 0; s < 2; ++s) {
    p.side[s].embeddings = Tensor(c.vocab_size, e);
    for (int d = 0; d < 2; ++d) {
      GruCell& g = p.side[s].dir[d];
      g.wxz = Tensor(e, h); g.whz = Tensor(h, h); g.bz = Tensor(1, h);
      g.wxr = Tensor(e, h); g.whr = Tensor(h, h); g.br = Tensor(1, h);
      g.wxn = Tensor(e, h); g.whn = Tensor(h, h); g.bn = Tensor(1, h);
    }
    p.side[s].att_w = Tensor(2 * h, a);
    p.side[s].att_v = Tensor(a, 1);
  }
  p.out_w = Tensor(4 * h, 1);
  p.out_b = Tensor(1, 1);

  Rng rng(seed);
  auto params = p.list();
  auto names = ModelParams::names();
  for (size_t i = 0; i < params.size(); ++i) {
    if (!is_bias(names[i])) glorot_fill(*params[i], rng);
  }
  return p;
}

int64_t parameter_count(const ModelConfig& config) {
  ModelConfig c = config.resolved();
  c.validate();
  const int64_t v = c.vocab_size, e = c.embedding_dim, h = c.hidden_dim,
                a = c.attention_dim;
  int64_t embeddings = 2 * v * e;
  int64_t gru = 2 * 2 * 3 * (e * h + h * h + h);  // sides * dirs * gates
  int64_t attention = 2 * (2 * h * a + a);
  int64_t output = 4 * h + 1;
  return embeddings + gru + attention + output;
}

BoundModel bind_model(Tape& tape, const ModelConfig& config,
                      const ModelParams& params) {
  std::vector<int> ids;
  for (const Tensor* t : params.list()) ids.push_back(tape.leaf_ref(t, true));
  return bind_model_nodes(tape, config, std::move(ids));
}

BoundModel bind_model_nodes(Tape& tape, const ModelConfig& config,
                            std::vector<int> param_nodes) {
  BoundModel bm;
  bm.config = &config;
  bm.params = std::move(param_nodes);
  Tensor neg(1, config.resolved().hidden_dim);
  for (double& x : neg.v) x = -1.0;
  bm.neg_ones_h = tape.leaf(std::move(neg), false);
  return bm;
}

namespace {

// Flat indices into ModelParams::list().
struct GateIds {
  int wxz, whz, bz, wxr, whr, br, wxn, whn, bn;
};
GateIds gate_ids(int side, int dir) {
  int base = 2 + (side * 2 + dir) * 9;
  return {base, base + 1, base + 2, base + 3, base + 4,
          base + 5, base + 6, base + 7, base + 8};
}
int emb_id(int side) { return side; }
int att_w_id(int side) { return 38 + side * 2; }
int att_v_id(int side) { return 39 + side * 2; }
constexpr int kOutW = 42;
constexpr int kOutB = 43;

// One gated recurrent step; x and h are 1 x dim rows on the tape.
int gru_step(Tape& t, const BoundModel& m, const GateIds& g, int x, int h) {
  auto gate = [&](int wx, int wh, int b) {
    return t.add(t.add(t.matmul(x, m.param(wx)), t.matmul(h, m.param(wh))),
                 m.param(b));
  };
  int z = t.sigmoid(gate(g.wxz, g.whz, g.bz));
  int r = t.sigmoid(gate(g.wxr, g.whr, g.br));
  int rh = t.mul(r, h);
  int n = t.tanh(t.add(
      t.add(t.matmul(x, m.param(g.wxn)), t.matmul(rh, m.param(g.whn))),
      m.param(g.bn)));
  // h' = (1 - z) * n + z * h, written as n + z * (h - n).
  int h_minus_n = t.add(h, t.mul(n, m.neg_ones_h));
  return t.add(n, t.mul(z, h_minus_n));
}

}  // namespace

int build_encoder(Tape& tape, const BoundModel& model, Side side,
                  const std::vector<int>& ids, int length) {
  const ModelConfig c = model.config->resolved();
  if (length < 1) throw ContractError("build_encoder: empty sentence");
  const int s = static_cast<int>(side);
  std::vector<int> real_ids(ids.begin(), ids.begin() + length);
  int embedded = tape.gather_rows(model.param(emb_id(s)), real_ids);

  std::vector<int> xs(length);
  for (int i = 0; i < length; ++i) {
    xs[i] = tape.gather_rows(embedded, {i});
  }
  int h0 = tape.leaf(Tensor(1, c.hidden_dim), false);

  std::vector<int> fwd(length), bwd(length);
  GateIds gf = gate_ids(s, 0), gb = gate_ids(s, 1);
  int h = h0;
  for (int i = 0; i < length; ++i) {
    h = gru_step(tape, model, gf, xs[i], h);
    fwd[i] = h;
  }
  h = h0;
  for (int i = length - 1; i >= 0; --i) {
    h = gru_step(tape, model, gb, xs[i], h);
    bwd[i] = h;
  }
  std::vector<int> rows(length);
  for (int i = 0; i < length; ++i) {
    const int parts[] = {fwd[i], bwd[i]};
    rows[i] = tape.concat(parts, false);
  }
  return tape.concat(rows, true);  // length x 2*hidden
}

int build_attention(Tape& tape, const BoundModel& model, Side side,
                    int states, int length) {
  const int s = static_cast<int>(side);
  int proj = tape.tanh(tape.matmul(states, model.param(att_w_id(s))));
  int scores = tape.matmul(proj, model.param(att_v_id(s)));  // length x 1
  std::vector<uint8_t> mask(static_cast<size_t>(length), 1);
  int alpha = tape.softmax_mask(scores, std::move(mask));
  // states^T * alpha -> 2*hidden x 1
  return tape.matmul(states, alpha, /*trans_a=*/true);
}

int build_prediction(Tape& tape, const BoundModel& model,
                     const Encoded& source, const Encoded& mt) {
  if (source.length < 1 || mt.length < 1) {
    throw ContractError("predict: sentence has no unmasked tokens");
  }
  int src_states = build_encoder(tape, model, Side::kSource, source.ids,
                                 source.length);
  int mt_states = build_encoder(tape, model, Side::kMt, mt.ids, mt.length);
  int src_vec = build_attention(tape, model, Side::kSource, src_states,
                                source.length);
  int mt_vec = build_attention(tape, model, Side::kMt, mt_states, mt.length);
  const int parts[] = {src_vec, mt_vec};
  int joint = tape.concat(parts, false);  // 4*hidden x 1
  int z = tape.add(tape.matmul(model.param(kOutW), joint, /*trans_a=*/true),
                   model.param(kOutB));
  return tape.sigmoid(z);
}

Tensor encode_sentence(const std::vector<int>& ids,
                       const std::vector<uint8_t>& mask, Side side,
                       const ModelConfig& config, const ModelParams& params) {
  ModelConfig c = config.resolved();
  if (ids.size() != mask.size()) {
    throw ContractError("encode_sentence: ids/mask length mismatch");
  }
  int length = 0;
  while (length < static_cast<int>(mask.size()) && mask[length]) ++length;
  Tensor out(static_cast<int>(ids.size()), 2 * c.hidden_dim);
  if (length == 0) return out;  // all rows zero; attention will reject
  Tape tape;
  BoundModel bm = bind_model(tape, config, params);
  int states = build_encoder(tape, bm, side, ids, length);
  const Tensor& h = tape.value(states);
  std::copy(h.v.begin(), h.v.end(), out.v.begin());
  return out;
}

AttentionResult attention_pool(const Tensor& states,
                               const std::vector<uint8_t>& mask, Side side,
                               const ModelConfig& /*config*/,
                               const ModelParams& params) {
  if (states.rows() != static_cast<int>(mask.size())) {
    throw ContractError("attention_pool: states/mask length mismatch");
  }
  bool any = false;
  for (uint8_t m : mask) any = any || m;
  if (!any) {
    throw ContractError("attention_pool: sentence has no unmasked tokens");
  }
  const int s = static_cast<int>(side);
  Tape tape;
  int h = tape.leaf(states, false);
  int w = tape.leaf_ref(&params.side[s].att_w, false);
  int v = tape.leaf_ref(&params.side[s].att_v, false);
  int proj = tape.tanh(tape.matmul(h, w));
  int scores = tape.matmul(proj, v);
  int alpha = tape.softmax_mask(scores, mask);
  int pooled = tape.matmul(h, alpha, /*trans_a=*/true);
  AttentionResult res;
  res.sentence = tape.value(pooled);
  res.weights = tape.value(alpha).v;
  return res;
}

double predict(const ModelConfig& config, const ModelParams& params,
               const Encoded& source, const Encoded& mt) {
  thread_local Tape tape;
  tape.reset();
  BoundModel bm = bind_model(tape, config, params);
  int out = build_prediction(tape, bm, source, mt);
  return tape.value(out).v[0];
}

}  // namespace qed
