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

#ifndef COOLCODEC_WEIGHT_CODEC_H_
#define COOLCODEC_WEIGHT_CODEC_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "coolcodec/arm.h"
#include "coolcodec/image.h"
#include "coolcodec/latent.h"
#include "coolcodec/mlp.h"

namespace coolcodec {

// Candidate quantization steps; the bitstream carries an index into this
// table.
inline constexpr std::array<double, 9> kWeightSteps = {
    1e-1, 5e-2, 1e-2, 5e-3, 1e-3, 5e-4, 1e-4, 5e-5, 1e-5};

// Quanta are coded by bisection over [-kQuantumLimit, kQuantumLimit).
inline constexpr int32_t kQuantumLimit = 1 << 30;

struct QuantizedMlp {
  MlpArchitecture arch;
  std::vector<int32_t> quanta;  // MlpWeights::Flatten() order
  int step_index = 0;
  // Population std-dev of the dequantized values, rounded to float because
  // that is what the header transmits.
  float sigma = 0.0f;

  double step() const { return kWeightSteps.at(step_index); }
  MlpWeights Dequantize() const;
};

// quanta = round-half-away(value / step). Throws Error{kInvalidArgument} on
// non-finite weights, a bad step index or quanta beyond kQuantumLimit.
QuantizedMlp QuantizeWeights(const MlpWeights& weights, int step_index);

// Laplace scale, in quantum units, used to code q: b = max(sigma,
// 1e-6 step) / sqrt(2) / step.
double WeightModelScale(float sigma, double step);

// Sum of -log2 p(q_i) with p the Laplace(0, b) mass of
// [step (q - 1/2), step (q + 1/2)]. No probability floor: the bisection
// coder spends the full -log2 p on tail quanta, so a floor would
// undercount fine steps.
double WeightRateBits(const QuantizedMlp& q);

// Range-codes the quanta by bisection, each binary decision driven by the
// same Laplace model, so the cost tracks WeightRateBits without needing an
// alphabet bound.
std::vector<uint8_t> EncodeWeights(const QuantizedMlp& q);
QuantizedMlp DecodeWeights(std::span<const uint8_t> payload,
                           const MlpArchitecture& arch, int step_index,
                           float sigma);

// Everything the step search needs from a finished training run.
struct StepSearchInput {
  const Image* image = nullptr;
  const LatentPyramid* latents = nullptr;  // integer mode
  const MlpWeights* synthesis = nullptr;
  const MlpWeights* arm = nullptr;
  const ContextPattern* pattern = nullptr;
  double lambda = 0.0;
};

struct StepPairCost {
  int synthesis_step_index = 0;
  int arm_step_index = 0;
  double distortion = 0.0;     // MSE on [0, 1] samples of the 8-bit output
  double latent_bits = 0.0;    // under the quantized ARM
  double mlp_bits = 0.0;       // WeightRateBits of both networks
  double cost = 0.0;           // distortion + lambda * bits / (H W)
};

struct StepSearchResult {
  StepPairCost best;
  std::vector<StepPairCost> evaluated;
};

// Evaluates D + lambda (R_latent + R_mlp) for every (synthesis, arm) pair of
// candidate indices and returns the minimum. Iteration runs from the
// coarsest steps to the finest and only a strictly lower cost replaces the
// incumbent, so ties go to the larger steps. Throws Error{kDivergence} when
// no pair has a finite cost.
StepSearchResult SearchSteps(const StepSearchInput& input,
                             std::span<const int> candidates);

}  // namespace coolcodec

#endif  // COOLCODEC_WEIGHT_CODEC_H_
