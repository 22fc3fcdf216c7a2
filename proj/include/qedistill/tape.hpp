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

#ifndef QEDISTILL_TAPE_HPP_
#define QEDISTILL_TAPE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qedistill/tensor.hpp"

namespace qed {

// Primitive set of the differentiation core. Values are computed eagerly;
// backward() replays the recorded nodes in reverse.
enum class Prim : uint8_t {
  kLeaf,
  kMatmul,       // optional transpose flags on either operand
  kAdd,          // same shape, or matrix + bias row vector
  kMul,          // elementwise, same shape
  kTanh,
  kSigmoid,
  kSoftmaxMask,  // masked, max-subtracted softmax over a vector
  kConcat,       // n-ary; joins vectors, or stacks equal-length rows
  kGatherRows,   // integer row lookup into a matrix
  kReduceMean,   // mean over all entries -> 1x1
  kMse,          // mean squared difference -> 1x1
};

const char* prim_name(Prim kind);

// Side data for primitives that need it. Masks and indices are constants of
// the node, not differentiable inputs.
struct PrimAttrs {
  bool trans_a = false;       // matmul
  bool trans_b = false;       // matmul
  bool stack_rows = false;    // concat: k same-length vectors -> k x n matrix
  std::vector<int> indices;   // gather-rows
  std::vector<uint8_t> mask;  // softmax-with-mask
};

class Tape {
 public:
  struct Node {
    Prim kind = Prim::kLeaf;
    bool is_param = false;
    PrimAttrs attrs;
    std::vector<int> inputs;
    Tensor owned;                  // value storage for non-leaf nodes
    const Tensor* external = nullptr;  // leaves may alias caller storage
    Tensor grad;                   // sized during backward()

    const Tensor& value() const { return external ? *external : owned; }
  };

  // Leaf holding a copy of v.
  int leaf(Tensor v, bool is_param = false);
  // Leaf aliasing caller-owned storage; the tensor must outlive the tape and
  // stay unmodified until backward() is done. Avoids copying big parameter
  // arrays (embedding tables) into every tape.
  int leaf_ref(const Tensor* v, bool is_param = true);

  // Records one primitive application and eagerly computes its value.
  // Throws DimensionError / IndexError / ContractError on bad inputs.
  int apply(Prim kind, std::span<const int> inputs, PrimAttrs attrs = {});

  // Convenience wrappers.
  int matmul(int a, int b, bool trans_a = false, bool trans_b = false);
  int add(int a, int b);
  int mul(int a, int b);
  int tanh(int a);
  int sigmoid(int a);
  int softmax_mask(int a, std::vector<uint8_t> mask);
  int concat(std::span<const int> parts, bool stack_rows = false);
  int gather_rows(int a, std::vector<int> indices);
  int reduce_mean(int a);
  int mse(int a, int b);

  // Reverse sweep from a scalar loss node. Gradients of all nodes reachable
  // from the loss are populated; use grad()/param_gradients() to read them.
  void backward(int loss);

  const Tensor& value(int id) const { return nodes_[check(id)].value(); }
  const Tensor& grad(int id) const;

  struct ParamGrad {
    int node;
    const Tensor* grad;
  };
  // Gradients of parameter leaves, in registration order.
  std::vector<ParamGrad> param_gradients() const;

  size_t size() const { return nodes_.size(); }
  // Drops all nodes but keeps allocated capacity for reuse.
  void reset();

 private:
  int check(int id) const;
  int push(Node n);
  std::vector<Node> nodes_;
};

// Free-function spelling of the primitive application operation.
inline int apply_primitive(Tape& tape, Prim kind, std::span<const int> inputs,
                           PrimAttrs attrs = {}) {
  return tape.apply(kind, inputs, std::move(attrs));
}

}  // namespace qed

#endif  // QEDISTILL_TAPE_HPP_
