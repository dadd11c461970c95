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

#include "coolcodec/grad.h"

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include "coolcodec/error.h"
#include "coolcodec/upsample.h"

namespace coolcodec::grad {
namespace {

void RequireSameShape(int rows_a, int cols_a, int rows_b, int cols_b,
                      const char* what) {
  if (rows_a != rows_b || cols_a != cols_b) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("shape mismatch in ") + what);
  }
}

// Calls f(std::integral_constant<int, n>) for n in 1..16, else with 0, so
// the small MLP layer loops get compile-time trip counts.
template <typename F>
void WithStaticExtent(int n, F&& f) {
  [&]<int... Ks>(std::integer_sequence<int, Ks...>) {
    const bool hit =
        ((n == Ks + 1 ? (f(std::integral_constant<int, Ks + 1>{}), true)
                      : false) ||
         ...);
    if (!hit) f(std::integral_constant<int, 0>{});
  }(std::make_integer_sequence<int, 16>{});
}

}  // namespace

void Tape::Clear() {
  size_ = 0;
  differentiated_ = false;
}

Tape::Node& Tape::NewNode(Op op, int rows, int cols,
                          std::initializer_list<Var> inputs) {
  for (Var v : inputs) node(v);  // validates ids before we grow
  if (size_ == nodes_.size()) nodes_.emplace_back();
  Node& n = nodes_[size_++];
  n.op = op;
  n.rows = rows;
  n.cols = cols;
  n.value.resize(static_cast<size_t>(rows) * cols);
  n.inputs.clear();
  n.requires_grad = false;
  for (Var v : inputs) {
    n.inputs.push_back(v.id);
    n.requires_grad = n.requires_grad || nodes_[v.id].requires_grad;
  }
  n.param = nullptr;
  n.factor = 0.0;
  return n;
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id < 0 || static_cast<size_t>(v.id) >= size_) {
    throw Error(ErrorCode::kOrdering, "variable does not belong to the current graph");
  }
  return nodes_[v.id];
}

Tape::Node& Tape::node(Var v) {
  return const_cast<Node&>(static_cast<const Tape*>(this)->node(v));
}

int Tape::rows(Var v) const { return node(v).rows; }
int Tape::cols(Var v) const { return node(v).cols; }
std::span<const double> Tape::value(Var v) const { return node(v).value; }

double Tape::scalar(Var v) const {
  const Node& n = node(v);
  if (n.value.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "node is not a scalar");
  }
  return n.value[0];
}

Var Tape::Leaf(Parameter& param, int rows, int cols) {
  if (param.size() != static_cast<size_t>(rows) * cols ||
      param.gradient.size() != param.size()) {
    throw Error(ErrorCode::kInvalidArgument, "leaf shape does not match parameter");
  }
  Node& n = NewNode(Op::kLeaf, rows, cols, {});
  std::copy(param.values.begin(), param.values.end(), n.value.begin());
  n.param = &param;
  n.requires_grad = true;
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Constant(std::span<const double> values, int rows, int cols) {
  if (values.size() != static_cast<size_t>(rows) * cols) {
    throw Error(ErrorCode::kInvalidArgument, "constant shape mismatch");
  }
  Node& n = NewNode(Op::kConstant, rows, cols, {});
  std::copy(values.begin(), values.end(), n.value.begin());
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Add(Var a, Var b) {
  RequireSameShape(rows(a), cols(a), rows(b), cols(b), "Add");
  Node& n = NewNode(Op::kAdd, rows(a), cols(a), {a, b});
  const auto& x = nodes_[a.id].value;
  const auto& y = nodes_[b.id].value;
  for (size_t i = 0; i < n.value.size(); ++i) n.value[i] = x[i] + y[i];
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Mul(Var a, Var b) {
  RequireSameShape(rows(a), cols(a), rows(b), cols(b), "Mul");
  Node& n = NewNode(Op::kMul, rows(a), cols(a), {a, b});
  const auto& x = nodes_[a.id].value;
  const auto& y = nodes_[b.id].value;
  for (size_t i = 0; i < n.value.size(); ++i) n.value[i] = x[i] * y[i];
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Scale(Var a, double factor) {
  Node& n = NewNode(Op::kScale, rows(a), cols(a), {a});
  n.factor = factor;
  const auto& x = nodes_[a.id].value;
  for (size_t i = 0; i < n.value.size(); ++i) n.value[i] = factor * x[i];
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Relu(Var a) {
  Node& n = NewNode(Op::kRelu, rows(a), cols(a), {a});
  const auto& x = nodes_[a.id].value;
  for (size_t i = 0; i < n.value.size(); ++i) n.value[i] = x[i] > 0.0 ? x[i] : 0.0;
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Sum(Var a) {
  Node& n = NewNode(Op::kSum, 1, 1, {a});
  double acc = 0.0;
  for (double v : nodes_[a.id].value) acc += v;
  n.value[0] = acc;
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Affine(Var x, Var weight, Var bias) {
  const int in = cols(x);
  const int out = rows(weight);
  if (cols(weight) != in || rows(bias) * cols(bias) != out) {
    throw Error(ErrorCode::kInvalidArgument, "shape mismatch in Affine");
  }
  const int batch = rows(x);
  Node& n = NewNode(Op::kAffine, batch, out, {x, weight, bias});
  const double* xs = nodes_[x.id].value.data();
  const double* w = nodes_[weight.id].value.data();
  const double* b = nodes_[bias.id].value.data();
  // Transposed copy so the inner loop runs over contiguous outputs.
  scratch_.resize(static_cast<size_t>(in) * out);
  for (int o = 0; o < out; ++o) {
    for (int i = 0; i < in; ++i) scratch_[static_cast<size_t>(i) * out + o] = w[o * in + i];
  }
  const double* wt = scratch_.data();
  double* ys = n.value.data();
  WithStaticExtent(out, [&](auto extent) {
    constexpr int kStatic = decltype(extent)::value;
    const int len = kStatic ? kStatic : out;
    double acc[kStatic ? kStatic : 1];
    for (int r = 0; r < batch; ++r) {
      double* y = ys + static_cast<size_t>(r) * len;
      const double* xr = xs + static_cast<size_t>(r) * in;
      if constexpr (kStatic > 0) {
        for (int o = 0; o < kStatic; ++o) acc[o] = b[o];
        for (int i = 0; i < in; ++i) {
          const double xi = xr[i];
          const double* wrow = wt + static_cast<size_t>(i) * kStatic;
          for (int o = 0; o < kStatic; ++o) acc[o] += xi * wrow[o];
        }
        for (int o = 0; o < kStatic; ++o) y[o] = acc[o];
      } else {
        for (int o = 0; o < len; ++o) y[o] = b[o];
        for (int i = 0; i < in; ++i) {
          const double xi = xr[i];
          const double* wrow = wt + static_cast<size_t>(i) * len;
          for (int o = 0; o < len; ++o) y[o] += xi * wrow[o];
        }
      }
    }
  });
  return {static_cast<int>(size_ - 1)};
}

Var Tape::UpsampleX2(Var a, int out_rows, int out_cols) {
  Node& n = NewNode(Op::kUpsample, out_rows, out_cols, {a});
  const Node& in = nodes_[a.id];
  UpsampleX2Into(in.value, in.rows, in.cols, out_rows, out_cols, scratch_,
                 n.value);
  return {static_cast<int>(size_ - 1)};
}

Var Tape::StackColumns(std::span<const Var> columns) {
  if (columns.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "StackColumns needs inputs");
  }
  const size_t count = value(columns[0]).size();
  for (Var c : columns) {
    if (value(c).size() != count) {
      throw Error(ErrorCode::kInvalidArgument, "StackColumns size mismatch");
    }
  }
  const int k = static_cast<int>(columns.size());
  Node& n = NewNode(Op::kStack, static_cast<int>(count), k, {});
  for (Var c : columns) {
    n.inputs.push_back(c.id);
    n.requires_grad = n.requires_grad || nodes_[c.id].requires_grad;
  }
  for (int c = 0; c < k; ++c) {
    const auto& src = nodes_[columns[c].id].value;
    for (size_t r = 0; r < count; ++r) n.value[r * k + c] = src[r];
  }
  return {static_cast<int>(size_ - 1)};
}

Var Tape::ConcatRows(std::span<const Var> parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ConcatRows needs inputs");
  }
  const int c = cols(parts[0]);
  int total = 0;
  for (Var p : parts) {
    if (cols(p) != c) {
      throw Error(ErrorCode::kInvalidArgument, "ConcatRows column mismatch");
    }
    total += rows(p);
  }
  Node& n = NewNode(Op::kConcat, total, c, {});
  size_t offset = 0;
  for (Var p : parts) {
    n.inputs.push_back(p.id);
    n.requires_grad = n.requires_grad || nodes_[p.id].requires_grad;
    const auto& src = nodes_[p.id].value;
    std::copy(src.begin(), src.end(), n.value.begin() + offset);
    offset += src.size();
  }
  return {static_cast<int>(size_ - 1)};
}

Var Tape::Reshape(Var a, int rows, int cols) {
  if (value(a).size() != static_cast<size_t>(rows) * cols) {
    throw Error(ErrorCode::kInvalidArgument, "Reshape size mismatch");
  }
  Node& n = NewNode(Op::kReshape, rows, cols, {a});
  const auto& src = nodes_[a.id].value;
  std::copy(src.begin(), src.end(), n.value.begin());
  return {static_cast<int>(size_ - 1)};
}

Var Tape::GatherContext(Var grid, const ContextPattern& pattern) {
  const int h = rows(grid);
  const int w = cols(grid);
  const int c = pattern.size();
  Node& n = NewNode(Op::kGather, h * w, c, {grid});
  n.offsets = pattern.offsets();
  const double* src = nodes_[grid.id].value.data();
  double* dst = n.value.data();
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      for (int k = 0; k < c; ++k) {
        const int r = i + n.offsets[k].di;
        const int s = j + n.offsets[k].dj;
        *dst++ = (r >= 0 && r < h && s >= 0 && s < w)
                     ? src[static_cast<size_t>(r) * w + s]
                     : 0.0;
      }
    }
  }
  return {static_cast<int>(size_ - 1)};
}

Var Tape::MeanSquaredError(Var a, Var target) {
  RequireSameShape(rows(a), cols(a), rows(target), cols(target),
                   "MeanSquaredError");
  Node& n = NewNode(Op::kMse, 1, 1, {a, target});
  const auto& x = nodes_[a.id].value;
  const auto& t = nodes_[target.id].value;
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - t[i];
    acc += d * d;
  }
  n.value[0] = acc / static_cast<double>(x.size());
  return {static_cast<int>(size_ - 1)};
}

Var Tape::LaplaceRate(Var values, Var net) {
  const size_t m = value(values).size();
  if (cols(net) != 2 || static_cast<size_t>(rows(net)) != m) {
    throw Error(ErrorCode::kInvalidArgument, "LaplaceRate expects net of M x 2");
  }
  Node& n = NewNode(Op::kLaplaceRate, 1, 1, {values, net});
  const auto& v = nodes_[values.id].value;
  const auto& raw = nodes_[net.id].value;
  n.aux.resize(3 * m);
  double bits = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double mu = raw[2 * i];
    const double unclamped = std::exp(raw[2 * i + 1]);
    const double scale =
        std::clamp(unclamped, kMinLaplaceScale, kMaxLaplaceScale);
    const RateTerm term = LaplaceRateTerm(v[i], mu, scale);
    bits += term.bits;
    n.aux[3 * i] = term.d_value;
    n.aux[3 * i + 1] = term.d_mu;
    // d scale / d log-scale is the scale itself inside the clamp, else 0.
    n.aux[3 * i + 2] =
        (unclamped > kMinLaplaceScale && unclamped < kMaxLaplaceScale)
            ? term.d_scale * scale
            : 0.0;
  }
  n.value[0] = bits;
  return {static_cast<int>(size_ - 1)};
}

void Tape::Backprop(Var loss) {
  if (size_ == 0) {
    throw Error(ErrorCode::kOrdering, "backprop on an empty graph");
  }
  if (differentiated_) {
    throw Error(ErrorCode::kOrdering,
                "graph already differentiated; Clear() and re-evaluate first");
  }
  const Node& root = node(loss);
  if (root.value.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "loss must be a scalar node");
  }
  differentiated_ = true;
  for (size_t i = 0; i <= static_cast<size_t>(loss.id); ++i) {
    Node& n = nodes_[i];
    if (n.requires_grad) n.grad.assign(n.value.size(), 0.0);
  }
  nodes_[loss.id].grad[0] = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.requires_grad) BackwardNode(n);
  }
}

void Tape::BackwardNode(Node& n) {
  const auto input = [&](size_t k) -> Node& { return nodes_[n.inputs[k]]; };
  const auto& g = n.grad;
  switch (n.op) {
    case Op::kConstant:
      return;
    case Op::kLeaf: {
      auto& pg = n.param->gradient;
      for (size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
      return;
    }
    case Op::kAdd:
      for (size_t k = 0; k < 2; ++k) {
        Node& in = input(k);
        if (!in.requires_grad) continue;
        for (size_t i = 0; i < g.size(); ++i) in.grad[i] += g[i];
      }
      return;
    case Op::kMul: {
      Node& a = input(0);
      Node& b = input(1);
      if (a.requires_grad) {
        for (size_t i = 0; i < g.size(); ++i) a.grad[i] += g[i] * b.value[i];
      }
      if (b.requires_grad) {
        for (size_t i = 0; i < g.size(); ++i) b.grad[i] += g[i] * a.value[i];
      }
      return;
    }
    case Op::kScale: {
      Node& a = input(0);
      for (size_t i = 0; i < g.size(); ++i) a.grad[i] += n.factor * g[i];
      return;
    }
    case Op::kRelu: {
      Node& a = input(0);
      for (size_t i = 0; i < g.size(); ++i) {
        if (a.value[i] > 0.0) a.grad[i] += g[i];
      }
      return;
    }
    case Op::kSum: {
      Node& a = input(0);
      for (double& v : a.grad) v += g[0];
      return;
    }
    case Op::kAffine: {
      Node& x = input(0);
      Node& w = input(1);
      Node& b = input(2);
      const int in = x.cols;
      const int out = n.cols;
      const double* gs = g.data();
      WithStaticExtent(in, [&](auto extent) {
        constexpr int kStatic = decltype(extent)::value;
        const int len = kStatic ? kStatic : in;
        double acc[kStatic ? kStatic : 1];
        if (x.requires_grad) {
          const double* wv = w.value.data();
          for (int r = 0; r < n.rows; ++r) {
            double* dx = x.grad.data() + static_cast<size_t>(r) * len;
            const double* gr = gs + static_cast<size_t>(r) * out;
            if constexpr (kStatic > 0) {
              for (int i = 0; i < kStatic; ++i) acc[i] = dx[i];
              for (int o = 0; o < out; ++o) {
                const double go = gr[o];
                const double* wrow = wv + static_cast<size_t>(o) * kStatic;
                for (int i = 0; i < kStatic; ++i) acc[i] += go * wrow[i];
              }
              for (int i = 0; i < kStatic; ++i) dx[i] = acc[i];
            } else {
              for (int o = 0; o < out; ++o) {
                const double go = gr[o];
                const double* wrow = wv + static_cast<size_t>(o) * len;
                for (int i = 0; i < len; ++i) dx[i] += go * wrow[i];
              }
            }
          }
        }
        if (w.requires_grad) {
          const double* xv = x.value.data();
          for (int o = 0; o < out; ++o) {
            double* dwrow = w.grad.data() + static_cast<size_t>(o) * len;
            if constexpr (kStatic > 0) {
              for (int i = 0; i < kStatic; ++i) acc[i] = dwrow[i];
              for (int r = 0; r < n.rows; ++r) {
                const double go = gs[static_cast<size_t>(r) * out + o];
                const double* xr = xv + static_cast<size_t>(r) * kStatic;
                for (int i = 0; i < kStatic; ++i) acc[i] += go * xr[i];
              }
              for (int i = 0; i < kStatic; ++i) dwrow[i] = acc[i];
            } else {
              for (int r = 0; r < n.rows; ++r) {
                const double go = gs[static_cast<size_t>(r) * out + o];
                const double* xr = xv + static_cast<size_t>(r) * len;
                for (int i = 0; i < len; ++i) dwrow[i] += go * xr[i];
              }
            }
          }
        }
      });
      if (b.requires_grad) {
        for (int r = 0; r < n.rows; ++r) {
          const double* gr = gs + static_cast<size_t>(r) * out;
          for (int o = 0; o < out; ++o) b.grad[o] += gr[o];
        }
      }
      return;
    }
    case Op::kUpsample: {
      Node& a = input(0);
      UpsampleX2AdjointInto(g, n.rows, n.cols, a.rows, a.cols, scratch_, a.grad);
      return;
    }
    case Op::kStack: {
      const size_t k = n.inputs.size();
      for (size_t c = 0; c < k; ++c) {
        Node& in = input(c);
        if (!in.requires_grad) continue;
        for (size_t r = 0; r < in.grad.size(); ++r) in.grad[r] += g[r * k + c];
      }
      return;
    }
    case Op::kConcat: {
      size_t offset = 0;
      for (size_t p = 0; p < n.inputs.size(); ++p) {
        Node& in = input(p);
        if (in.requires_grad) {
          for (size_t i = 0; i < in.grad.size(); ++i) in.grad[i] += g[offset + i];
        }
        offset += in.value.size();
      }
      return;
    }
    case Op::kReshape: {
      Node& a = input(0);
      for (size_t i = 0; i < g.size(); ++i) a.grad[i] += g[i];
      return;
    }
    case Op::kGather: {
      Node& grid = input(0);
      const int h = grid.rows;
      const int w = grid.cols;
      const int c = n.cols;
      const double* src = g.data();
      for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
          for (int k = 0; k < c; ++k, ++src) {
            const int r = i + n.offsets[k].di;
            const int s = j + n.offsets[k].dj;
            if (r >= 0 && r < h && s >= 0 && s < w) {
              grid.grad[static_cast<size_t>(r) * w + s] += *src;
            }
          }
        }
      }
      return;
    }
    case Op::kMse: {
      Node& a = input(0);
      Node& t = input(1);
      const double k = 2.0 * g[0] / static_cast<double>(a.value.size());
      for (size_t i = 0; i < a.value.size(); ++i) {
        const double d = k * (a.value[i] - t.value[i]);
        if (a.requires_grad) a.grad[i] += d;
        if (t.requires_grad) t.grad[i] -= d;
      }
      return;
    }
    case Op::kLaplaceRate: {
      Node& values = input(0);
      Node& net = input(1);
      const size_t m = values.value.size();
      if (values.requires_grad) {
        for (size_t i = 0; i < m; ++i) values.grad[i] += g[0] * n.aux[3 * i];
      }
      if (net.requires_grad) {
        for (size_t i = 0; i < m; ++i) {
          net.grad[2 * i] += g[0] * n.aux[3 * i + 1];
          net.grad[2 * i + 1] += g[0] * n.aux[3 * i + 2];
        }
      }
      return;
    }
  }
}

}  // namespace coolcodec::grad
