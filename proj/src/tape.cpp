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

#include "qedistill/tape.hpp"

#include <cmath>
#include <cstring>

#include "qedistill/kernels.hpp"

namespace qed {

const char* prim_name(Prim kind) {
  switch (kind) {
    case Prim::kLeaf: return "leaf";
    case Prim::kMatmul: return "matmul";
    case Prim::kAdd: return "add";
    case Prim::kMul: return "elementwise-mul";
    case Prim::kTanh: return "tanh";
    case Prim::kSigmoid: return "sigmoid";
    case Prim::kSoftmaxMask: return "softmax-with-mask";
    case Prim::kConcat: return "concat";
    case Prim::kGatherRows: return "gather-rows";
    case Prim::kReduceMean: return "reduce-mean";
    case Prim::kMse: return "mse";
  }
  return "?";
}

namespace {

[[noreturn]] void dim_fail(Prim kind, const std::string& detail) {
  throw DimensionError(std::string(prim_name(kind)) + ": " + detail);
}

void require_arity(Prim kind, size_t got, size_t want) {
  if (got != want) {
    throw ContractError(std::string(prim_name(kind)) + ": expected " +
                        std::to_string(want) + " inputs, got " +
                        std::to_string(got));
  }
}

bool is_vector(const Tensor& t) { return t.rows() == 1 || t.cols() == 1; }

}  // namespace

int Tape::check(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size()) {
    throw IndexError("tape: node id " + std::to_string(id) + " out of range");
  }
  return id;
}

int Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Tensor v, bool is_param) {
  Node n;
  n.kind = Prim::kLeaf;
  n.is_param = is_param;
  n.owned = std::move(v);
  return push(std::move(n));
}

int Tape::leaf_ref(const Tensor* v, bool is_param) {
  Node n;
  n.kind = Prim::kLeaf;
  n.is_param = is_param;
  n.external = v;
  return push(std::move(n));
}

int Tape::apply(Prim kind, std::span<const int> inputs, PrimAttrs attrs) {
  Node n;
  n.kind = kind;
  n.attrs = std::move(attrs);
  n.inputs.assign(inputs.begin(), inputs.end());
  for (int id : n.inputs) check(id);

  auto val = [&](size_t i) -> const Tensor& {
    return nodes_[n.inputs[i]].value();
  };

  switch (kind) {
    case Prim::kLeaf:
      throw ContractError("apply_primitive: leaf is not applicable");

    case Prim::kMatmul: {
      require_arity(kind, n.inputs.size(), 2);
      const Tensor& a = val(0);
      const Tensor& b = val(1);
      int m = n.attrs.trans_a ? a.cols() : a.rows();
      int ka = n.attrs.trans_a ? a.rows() : a.cols();
      int kb = n.attrs.trans_b ? b.cols() : b.rows();
      int c = n.attrs.trans_b ? b.rows() : b.cols();
      if (ka != kb) {
        dim_fail(kind, "cannot multiply " + a.shape_str() +
                           (n.attrs.trans_a ? "^T" : "") + " by " +
                           b.shape_str() + (n.attrs.trans_b ? "^T" : ""));
      }
      n.owned = Tensor(m, c);
      kern::gemm(n.owned.v.data(), a.v.data(), b.v.data(), m, c, ka,
                 n.attrs.trans_a, n.attrs.trans_b, false);
      break;
    }

    case Prim::kAdd: {
      require_arity(kind, n.inputs.size(), 2);
      const Tensor& a = val(0);
      const Tensor& b = val(1);
      if (a.same_shape(b)) {
        n.owned = Tensor(a.shape);
        kern::add(n.owned.v.data(), a.v.data(), b.v.data(), a.numel());
      } else if (b.rows() == 1 && b.cols() == a.cols()) {
        // matrix + bias row
        n.owned = Tensor(a.shape);
        kern::add_bias_rows(n.owned.v.data(), a.v.data(), b.v.data(),
                            a.rows(), a.cols());
      } else {
        dim_fail(kind, "shapes " + a.shape_str() + " and " + b.shape_str() +
                           " (only equal shapes or matrix + bias row)");
      }
      break;
    }

    case Prim::kMul: {
      require_arity(kind, n.inputs.size(), 2);
      const Tensor& a = val(0);
      const Tensor& b = val(1);
      if (!a.same_shape(b)) {
        dim_fail(kind, "shapes " + a.shape_str() + " and " + b.shape_str());
      }
      n.owned = Tensor(a.shape);
      kern::mul(n.owned.v.data(), a.v.data(), b.v.data(), a.numel());
      break;
    }

    case Prim::kTanh:
    case Prim::kSigmoid: {
      require_arity(kind, n.inputs.size(), 1);
      const Tensor& a = val(0);
      n.owned = Tensor(a.shape);
      if (kind == Prim::kTanh) {
        kern::tanh_v(n.owned.v.data(), a.v.data(), a.numel());
      } else {
        kern::sigmoid_v(n.owned.v.data(), a.v.data(), a.numel());
      }
      break;
    }

    case Prim::kSoftmaxMask: {
      require_arity(kind, n.inputs.size(), 1);
      const Tensor& a = val(0);
      if (!is_vector(a)) dim_fail(kind, "input must be a vector, got " + a.shape_str());
      if (n.attrs.mask.size() != a.numel()) {
        dim_fail(kind, "mask length " + std::to_string(n.attrs.mask.size()) +
                           " does not match input " + a.shape_str());
      }
      n.owned = Tensor(a.shape);
      if (!kern::softmax_masked(n.owned.v.data(), a.v.data(),
                                n.attrs.mask.data(),
                                static_cast<int>(a.numel()))) {
        throw ContractError("softmax-with-mask: all positions masked");
      }
      break;
    }

    case Prim::kConcat: {
      if (n.inputs.empty()) {
        throw ContractError("concat: needs at least one input");
      }
      const Tensor& first = val(0);
      if (n.attrs.stack_rows) {
        int cols = static_cast<int>(first.numel());
        for (size_t i = 0; i < n.inputs.size(); ++i) {
          const Tensor& t = val(i);
          if (!is_vector(t) || static_cast<int>(t.numel()) != cols) {
            dim_fail(kind, "row " + std::to_string(i) + " has shape " +
                               t.shape_str() + ", want length " +
                               std::to_string(cols));
          }
        }
        n.owned = Tensor(static_cast<int>(n.inputs.size()), cols);
        double* out = n.owned.v.data();
        for (size_t i = 0; i < n.inputs.size(); ++i) {
          std::memcpy(out + i * cols, val(i).v.data(), sizeof(double) * cols);
        }
      } else {
        size_t total = 0;
        bool column = first.cols() == 1 && first.rows() > 1;
        for (size_t i = 0; i < n.inputs.size(); ++i) {
          if (!is_vector(val(i))) {
            dim_fail(kind, "input " + std::to_string(i) +
                               " is not a vector: " + val(i).shape_str());
          }
          total += val(i).numel();
        }
        n.owned = column ? Tensor(static_cast<int>(total), 1)
                         : Tensor(1, static_cast<int>(total));
        double* out = n.owned.v.data();
        for (size_t i = 0; i < n.inputs.size(); ++i) {
          std::memcpy(out, val(i).v.data(), sizeof(double) * val(i).numel());
          out += val(i).numel();
        }
      }
      break;
    }

    case Prim::kGatherRows: {
      require_arity(kind, n.inputs.size(), 1);
      const Tensor& a = val(0);
      for (int idx : n.attrs.indices) {
        if (idx < 0 || idx >= a.rows()) {
          throw IndexError("gather-rows: index " + std::to_string(idx) +
                           " out of range for " + std::to_string(a.rows()) +
                           " rows");
        }
      }
      n.owned = Tensor(static_cast<int>(n.attrs.indices.size()), a.cols());
      kern::gather_rows(n.owned.v.data(), a.v.data(), n.attrs.indices.data(),
                        static_cast<int>(n.attrs.indices.size()), a.cols());
      break;
    }

    case Prim::kReduceMean: {
      require_arity(kind, n.inputs.size(), 1);
      const Tensor& a = val(0);
      double s = 0.0;
      for (double x : a.v) s += x;
      n.owned = Tensor::scalar(s / static_cast<double>(a.numel()));
      break;
    }

    case Prim::kMse: {
      require_arity(kind, n.inputs.size(), 2);
      const Tensor& a = val(0);
      const Tensor& b = val(1);
      if (!a.same_shape(b)) {
        dim_fail(kind, "shapes " + a.shape_str() + " and " + b.shape_str());
      }
      double s = 0.0;
      for (size_t i = 0; i < a.numel(); ++i) {
        double d = a.v[i] - b.v[i];
        s += d * d;
      }
      n.owned = Tensor::scalar(s / static_cast<double>(a.numel()));
      break;
    }
  }
  return push(std::move(n));
}

int Tape::matmul(int a, int b, bool trans_a, bool trans_b) {
  PrimAttrs at;
  at.trans_a = trans_a;
  at.trans_b = trans_b;
  const int in[] = {a, b};
  return apply(Prim::kMatmul, in, std::move(at));
}
int Tape::add(int a, int b) {
  const int in[] = {a, b};
  return apply(Prim::kAdd, in);
}
int Tape::mul(int a, int b) {
  const int in[] = {a, b};
  return apply(Prim::kMul, in);
}
int Tape::tanh(int a) {
  const int in[] = {a};
  return apply(Prim::kTanh, in);
}
int Tape::sigmoid(int a) {
  const int in[] = {a};
  return apply(Prim::kSigmoid, in);
}
int Tape::softmax_mask(int a, std::vector<uint8_t> mask) {
  PrimAttrs at;
  at.mask = std::move(mask);
  const int in[] = {a};
  return apply(Prim::kSoftmaxMask, in, std::move(at));
}
int Tape::concat(std::span<const int> parts, bool stack_rows) {
  PrimAttrs at;
  at.stack_rows = stack_rows;
  return apply(Prim::kConcat, parts, std::move(at));
}
int Tape::gather_rows(int a, std::vector<int> indices) {
  PrimAttrs at;
  at.indices = std::move(indices);
  const int in[] = {a};
  return apply(Prim::kGatherRows, in, std::move(at));
}
int Tape::reduce_mean(int a) {
  const int in[] = {a};
  return apply(Prim::kReduceMean, in);
}
int Tape::mse(int a, int b) {
  const int in[] = {a, b};
  return apply(Prim::kMse, in);
}

const Tensor& Tape::grad(int id) const {
  const Node& n = nodes_[check(id)];
  if (n.grad.numel() == 0) {
    throw ContractError("tape: gradient not computed for node " +
                        std::to_string(id));
  }
  return n.grad;
}

std::vector<Tape::ParamGrad> Tape::param_gradients() const {
  std::vector<ParamGrad> out;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_param && nodes_[i].grad.numel() > 0) {
      out.push_back({static_cast<int>(i), &nodes_[i].grad});
    }
  }
  return out;
}

void Tape::reset() { nodes_.clear(); }

void Tape::backward(int loss) {
  check(loss);
  if (nodes_[loss].value().numel() != 1) {
    throw ContractError("backward: loss must be scalar, got " +
                        nodes_[loss].value().shape_str());
  }

  // Mark nodes reachable from the loss so unrelated subgraphs stay untouched.
  std::vector<uint8_t> needed(nodes_.size(), 0);
  needed[loss] = 1;
  for (int i = loss; i >= 0; --i) {
    if (!needed[i]) continue;
    for (int in : nodes_[i].inputs) needed[in] = 1;
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (needed[i]) {
      nodes_[i].grad = Tensor(nodes_[i].value().shape);  // zero-filled
    } else {
      nodes_[i].grad = Tensor();
    }
  }
  nodes_[loss].grad.v[0] = 1.0;

  for (int i = loss; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!needed[i] || n.kind == Prim::kLeaf) continue;
    const Tensor& g = n.grad;
    auto in_val = [&](size_t j) -> const Tensor& {
      return nodes_[n.inputs[j]].value();
    };
    auto in_grad = [&](size_t j) -> Tensor& {
      return nodes_[n.inputs[j]].grad;
    };

    switch (n.kind) {
      case Prim::kLeaf:
        break;

      case Prim::kMatmul: {
        const Tensor& a = in_val(0);
        const Tensor& b = in_val(1);
        Tensor& da = in_grad(0);
        Tensor& db = in_grad(1);
        int m = g.rows(), c = g.cols();
        int k = n.attrs.trans_a ? a.rows() : a.cols();
        bool ta = n.attrs.trans_a, tb = n.attrs.trans_b;
        // dA and dB for the four transpose cases, written as gemms on the
        // stored (untransposed) layouts.
        if (!ta && !tb) {
          kern::gemm(da.v.data(), g.v.data(), b.v.data(), m, k, c, false,
                     true, true);
          kern::gemm(db.v.data(), a.v.data(), g.v.data(), k, c, m, true,
                     false, true);
        } else if (ta && !tb) {
          kern::gemm(da.v.data(), b.v.data(), g.v.data(), k, m, c, false,
                     true, true);
          kern::gemm(db.v.data(), a.v.data(), g.v.data(), k, c, m, false,
                     false, true);
        } else if (!ta && tb) {
          kern::gemm(da.v.data(), g.v.data(), b.v.data(), m, k, c, false,
                     false, true);
          kern::gemm(db.v.data(), g.v.data(), a.v.data(), c, k, m, true,
                     false, true);
        } else {
          kern::gemm(da.v.data(), b.v.data(), g.v.data(), k, m, c, true,
                     true, true);
          kern::gemm(db.v.data(), g.v.data(), a.v.data(), c, k, m, true,
                     true, true);
        }
        break;
      }

      case Prim::kAdd: {
        const Tensor& a = in_val(0);
        const Tensor& b = in_val(1);
        kern::acc(in_grad(0).v.data(), g.v.data(), g.numel());
        if (a.same_shape(b)) {
          kern::acc(in_grad(1).v.data(), g.v.data(), g.numel());
        } else {
          // bias row: column sums of g
          Tensor& db = in_grad(1);
          for (int r = 0; r < g.rows(); ++r) {
            for (int j = 0; j < g.cols(); ++j) {
              db.v[j] += g.at(r, j);
            }
          }
        }
        break;
      }

      case Prim::kMul: {
        kern::acc_prod(in_grad(0).v.data(), g.v.data(), in_val(1).v.data(),
                       g.numel());
        kern::acc_prod(in_grad(1).v.data(), g.v.data(), in_val(0).v.data(),
                       g.numel());
        break;
      }

      case Prim::kTanh: {
        Tensor& da = in_grad(0);
        const Tensor& y = n.value();
        for (size_t j = 0; j < g.numel(); ++j) {
          da.v[j] += g.v[j] * (1.0 - y.v[j] * y.v[j]);
        }
        break;
      }

      case Prim::kSigmoid: {
        Tensor& da = in_grad(0);
        const Tensor& y = n.value();
        for (size_t j = 0; j < g.numel(); ++j) {
          da.v[j] += g.v[j] * y.v[j] * (1.0 - y.v[j]);
        }
        break;
      }

      case Prim::kSoftmaxMask: {
        const Tensor& y = n.value();
        Tensor& da = in_grad(0);
        double dot = 0.0;
        for (size_t j = 0; j < y.numel(); ++j) {
          if (n.attrs.mask[j]) dot += g.v[j] * y.v[j];
        }
        for (size_t j = 0; j < y.numel(); ++j) {
          if (n.attrs.mask[j]) da.v[j] += y.v[j] * (g.v[j] - dot);
        }
        break;
      }

      case Prim::kConcat: {
        size_t off = 0;
        for (size_t j = 0; j < n.inputs.size(); ++j) {
          Tensor& dj = in_grad(j);
          kern::acc(dj.v.data(), g.v.data() + off, dj.numel());
          off += dj.numel();
        }
        break;
      }

      case Prim::kGatherRows: {
        Tensor& da = in_grad(0);
        kern::scatter_rows_add(da.v.data(), g.v.data(),
                               n.attrs.indices.data(),
                               static_cast<int>(n.attrs.indices.size()),
                               da.cols());
        break;
      }

      case Prim::kReduceMean: {
        Tensor& da = in_grad(0);
        double s = g.v[0] / static_cast<double>(da.numel());
        for (size_t j = 0; j < da.numel(); ++j) da.v[j] += s;
        break;
      }

      case Prim::kMse: {
        const Tensor& a = in_val(0);
        const Tensor& b = in_val(1);
        double scale = 2.0 * g.v[0] / static_cast<double>(a.numel());
        Tensor& da = in_grad(0);
        Tensor& db = in_grad(1);
        for (size_t j = 0; j < a.numel(); ++j) {
          double d = scale * (a.v[j] - b.v[j]);
          da.v[j] += d;
          db.v[j] -= d;
        }
        break;
      }
    }
  }
}

}  // namespace qed
