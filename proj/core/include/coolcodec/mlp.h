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

#ifndef COOLCODEC_MLP_H_
#define COOLCODEC_MLP_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coolcodec/random.h"

namespace coolcodec {

// Rectangular fully-connected network: input -> hidden... -> output, with a
// ReLU after every hidden layer and a linear output.
struct MlpArchitecture {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;

  // L latent values -> RGB.
  static MlpArchitecture Synthesis(int num_levels, int width);
  // C context values -> (mu, log scale).
  static MlpArchitecture Arm(int num_contexts, int width);

  int num_layers() const { return static_cast<int>(hidden.size()) + 1; }
  int layer_in(int l) const { return l == 0 ? input_dim : hidden[l - 1]; }
  int layer_out(int l) const {
    return l == static_cast<int>(hidden.size()) ? output_dim : hidden[l];
  }
  int max_width() const;

  friend bool operator==(const MlpArchitecture&, const MlpArchitecture&) = default;
};

// Sum over layers of in*out + out.
size_t ParamCount(const MlpArchitecture& arch);
// Multiply-accumulates for one forward pass: sum over layers of in*out.
size_t MacCount(const MlpArchitecture& arch);
// Decoder MACs per image pixel: one synthesis pass per pixel plus one ARM
// pass per latent pixel, i.e. weighted by sum_{k<L} 4^-k.
double MacPerPixel(const MlpArchitecture& synthesis, const MlpArchitecture& arm,
                   int num_levels);

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weight;  // out x in, row-major
  std::vector<double> bias;    // out
};

struct MlpWeights {
  MlpArchitecture arch;
  std::vector<DenseLayer> layers;
  // Set when every value is an exact multiple of this quantization step.
  std::optional<double> step;

  static MlpWeights Zeros(const MlpArchitecture& arch);
  // Weights ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  static MlpWeights RandomInit(const MlpArchitecture& arch, Rng& rng);

  // Layer by layer: weights row-major, then biases. This is the order used
  // for training parameters and for the weight bitstream.
  std::vector<double> Flatten() const;
  static MlpWeights Unflatten(const MlpArchitecture& arch,
                              std::span<const double> values);
};

// Fixed-order evaluation: each output starts at its bias and accumulates
// weight*input for inputs in ascending order. Encoder and decoder both go
// through here, which is what keeps entropy decoding in sync. When
// mac_counter is non-null it is incremented by the multiplies performed.
void MlpForward(const MlpWeights& w, std::span<const double> input,
                std::span<double> output, uint64_t* mac_counter = nullptr);

std::vector<double> MlpForward(const MlpWeights& w,
                               std::span<const double> input);

}  // namespace coolcodec

#endif  // COOLCODEC_MLP_H_
