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

#include "coolcodec/mlp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "coolcodec/error.h"

namespace coolcodec {
namespace {

constexpr int kMaxWidth = 256;

void ValidateArch(const MlpArchitecture& arch) {
  if (arch.input_dim <= 0 || arch.output_dim <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "MLP dims must be positive");
  }
  for (int h : arch.hidden) {
    if (h <= 0 || h > kMaxWidth) {
      throw Error(ErrorCode::kInvalidArgument,
                  "MLP hidden width out of range: " + std::to_string(h));
    }
  }
  if (arch.input_dim > kMaxWidth || arch.output_dim > kMaxWidth) {
    throw Error(ErrorCode::kInvalidArgument, "MLP too wide");
  }
}

}  // namespace

MlpArchitecture MlpArchitecture::Synthesis(int num_levels, int width) {
  return {num_levels, {width, width}, 3};
}

MlpArchitecture MlpArchitecture::Arm(int num_contexts, int width) {
  return {num_contexts, {width, width}, 2};
}

int MlpArchitecture::max_width() const {
  int m = std::max(input_dim, output_dim);
  for (int h : hidden) m = std::max(m, h);
  return m;
}

size_t ParamCount(const MlpArchitecture& arch) {
  size_t n = 0;
  for (int l = 0; l < arch.num_layers(); ++l) {
    n += static_cast<size_t>(arch.layer_in(l)) * arch.layer_out(l) +
         arch.layer_out(l);
  }
  return n;
}

size_t MacCount(const MlpArchitecture& arch) {
  size_t n = 0;
  for (int l = 0; l < arch.num_layers(); ++l) {
    n += static_cast<size_t>(arch.layer_in(l)) * arch.layer_out(l);
  }
  return n;
}

double MacPerPixel(const MlpArchitecture& synthesis, const MlpArchitecture& arm,
                   int num_levels) {
  double density = 0.0;
  for (int k = 0; k < num_levels; ++k) density += std::ldexp(1.0, -2 * k);
  return static_cast<double>(MacCount(synthesis)) +
         static_cast<double>(MacCount(arm)) * density;
}

MlpWeights MlpWeights::Zeros(const MlpArchitecture& arch) {
  ValidateArch(arch);
  MlpWeights w;
  w.arch = arch;
  for (int l = 0; l < arch.num_layers(); ++l) {
    DenseLayer layer;
    layer.in = arch.layer_in(l);
    layer.out = arch.layer_out(l);
    layer.weight.assign(static_cast<size_t>(layer.in) * layer.out, 0.0);
    layer.bias.assign(layer.out, 0.0);
    w.layers.push_back(std::move(layer));
  }
  return w;
}

MlpWeights MlpWeights::RandomInit(const MlpArchitecture& arch, Rng& rng) {
  MlpWeights w = Zeros(arch);
  for (DenseLayer& layer : w.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (double& v : layer.weight) v = rng.Uniform(-bound, bound);
  }
  return w;
}

std::vector<double> MlpWeights::Flatten() const {
  std::vector<double> out;
  out.reserve(ParamCount(arch));
  for (const DenseLayer& layer : layers) {
    out.insert(out.end(), layer.weight.begin(), layer.weight.end());
    out.insert(out.end(), layer.bias.begin(), layer.bias.end());
  }
  return out;
}

MlpWeights MlpWeights::Unflatten(const MlpArchitecture& arch,
                                 std::span<const double> values) {
  MlpWeights w = Zeros(arch);
  if (values.size() != ParamCount(arch)) {
    throw Error(ErrorCode::kInvalidArgument, "flat MLP parameter count mismatch");
  }
  size_t pos = 0;
  for (DenseLayer& layer : w.layers) {
    for (double& v : layer.weight) v = values[pos++];
    for (double& v : layer.bias) v = values[pos++];
  }
  return w;
}

void MlpForward(const MlpWeights& w, std::span<const double> input,
                std::span<double> output, uint64_t* mac_counter) {
  if (input.size() != static_cast<size_t>(w.arch.input_dim) ||
      output.size() != static_cast<size_t>(w.arch.output_dim)) {
    throw Error(ErrorCode::kInvalidArgument, "MLP input/output size mismatch");
  }
  double buffers[2][kMaxWidth];
  const double* src = input.data();
  const size_t last = w.layers.size() - 1;
  for (size_t l = 0; l < w.layers.size(); ++l) {
    const DenseLayer& layer = w.layers[l];
    double* dst = l == last ? output.data() : buffers[l & 1];
    const double* row = layer.weight.data();
    for (int o = 0; o < layer.out; ++o, row += layer.in) {
      double acc = layer.bias[o];
      for (int i = 0; i < layer.in; ++i) acc += row[i] * src[i];
      dst[o] = (l == last || acc > 0.0) ? acc : 0.0;
    }
    if (mac_counter) *mac_counter += static_cast<uint64_t>(layer.in) * layer.out;
    src = dst;
  }
}

std::vector<double> MlpForward(const MlpWeights& w,
                               std::span<const double> input) {
  std::vector<double> out(w.arch.output_dim);
  MlpForward(w, input, out);
  return out;
}

}  // namespace coolcodec
