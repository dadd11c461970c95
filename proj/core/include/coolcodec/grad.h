// Copyright 2026 The Coolcodec Authors. All Rights Reserved.
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

#ifndef COOLCODEC_GRAD_H_
#define COOLCODEC_GRAD_H_

#include <algorithm>
#include <deque>
#include <span>
#include <vector>

#include "coolcodec/arm.h"

// Reverse-mode differentiation restricted to the node types the encoder's
// loss is built from. Nodes are dense row-major matrices evaluated eagerly
// when created; Backprop walks them in reverse creation order.
namespace coolcodec::grad {

struct Parameter {
  std::vector<double> values;
  std::vector<double> gradient;

  Parameter() = default;
  explicit Parameter(std::vector<double> v)
      : values(std::move(v)), gradient(values.size(), 0.0) {}

  size_t size() const { return values.size(); }
  void ZeroGrad() { std::fill(gradient.begin(), gradient.end(), 0.0); }
};

// Handle to a node of one Tape.
struct Var {
  int id = -1;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Drops all nodes but keeps their buffers for the next graph of the same
  // shape, which is the per-iteration pattern of the encoder.
  void Clear();

  // Reads param.values; Backprop adds into param.gradient. param must
  // outlive the tape contents.
  Var Leaf(Parameter& param, int rows, int cols);
  Var Constant(std::span<const double> values, int rows, int cols);

  Var Add(Var a, Var b);
  Var Mul(Var a, Var b);
  Var Scale(Var a, double factor);
  Var Relu(Var a);  // derivative 0 at exactly 0
  Var Sum(Var a);

  // x: N x in, weight: out x in, bias: 1 x out  ->  N x out.
  Var Affine(Var x, Var weight, Var bias);

  // a: h x w grid -> out_rows x out_cols (Catmull-Rom x2).
  Var UpsampleX2(Var a, int out_rows, int out_cols);

  // Each input holds N values; output is N x inputs.size(), input c in
  // column c.
  Var StackColumns(std::span<const Var> columns);
  // Inputs share a column count; output stacks their rows in order.
  Var ConcatRows(std::span<const Var> parts);
  // Reshape without copying semantics change (same element order).
  Var Reshape(Var a, int rows, int cols);

  // grid: h x w -> (h w) x C, row m = context of raster position m, zero
  // outside the grid.
  Var GatherContext(Var grid, const ContextPattern& pattern);

  // mean((a - target)^2) as a 1 x 1 node.
  Var MeanSquaredError(Var a, Var target);

  // Sum over m of -log2 p(values[m]) with p the Laplace mass of
  // [v - 1/2, v + 1/2] under mu = net(m, 0), b = clamp(exp(net(m, 1))),
  // floored like LaplaceProb. values: M elements, net: M x 2.
  Var LaplaceRate(Var values, Var net);

  int rows(Var v) const;
  int cols(Var v) const;
  std::span<const double> value(Var v) const;
  double scalar(Var v) const;

  // Accumulates d(loss)/d(param) into every Leaf parameter. loss must be a
  // 1 x 1 node of the current graph, and each graph can be differentiated
  // once; violations throw Error{kOrdering}.
  void Backprop(Var loss);

  size_t num_nodes() const { return size_; }

 private:
  enum class Op {
    kLeaf,
    kConstant,
    kAdd,
    kMul,
    kScale,
    kRelu,
    kSum,
    kAffine,
    kUpsample,
    kStack,
    kConcat,
    kReshape,
    kGather,
    kMse,
    kLaplaceRate,
  };

  struct Node {
    Op op = Op::kConstant;
    int rows = 0;
    int cols = 0;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<int> inputs;
    std::vector<double> aux;  // op-specific cached partials
    std::vector<ContextOffset> offsets;
    double factor = 0.0;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  Node& NewNode(Op op, int rows, int cols, std::initializer_list<Var> inputs);
  const Node& node(Var v) const;
  Node& node(Var v);
  void BackwardNode(Node& n);

  // deque: node references stay valid while the graph grows.
  std::deque<Node> nodes_;
  size_t size_ = 0;
  bool differentiated_ = false;
  std::vector<double> scratch_;
};

// Adam with bias correction. Moments are allocated lazily to match the
// parameter list on first use.
struct AdamOptimizer {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step_count = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

// One Adam update of every parameter from its current gradient; gradients
// are left in place. A NaN or infinite gradient aborts the whole step
// (values untouched) with Error{kDivergence} naming the parameter.
void AdamStep(AdamOptimizer& opt, std::span<Parameter* const> params);

}  // namespace coolcodec::grad

#endif  // COOLCODEC_GRAD_H_
