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

#include "coolcodec/weight_codec.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "coolcodec/error.h"
#include "coolcodec/range_coder.h"
#include "coolcodec/synthesis.h"
#include "coolcodec/upsample.h"

namespace coolcodec {
namespace {

void CheckStepIndex(int step_index) {
  if (step_index < 0 || step_index >= static_cast<int>(kWeightSteps.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "weight step index out of range: " + std::to_string(step_index));
  }
}

// P(q < mid | lo <= q < hi) for q ~ discretized Laplace(0, scale), as a
// 16-bit zero count. One-sided intervals use the memoryless form of the
// exponential tail, which stays exact far out where CDF differences cancel.
uint32_t SplitZeroCount(int64_t lo, int64_t mid, int64_t hi, double scale) {
  double p_left;
  if (lo >= 1) {
    p_left = std::expm1(-static_cast<double>(mid - lo) / scale) /
             std::expm1(-static_cast<double>(hi - lo) / scale);
  } else if (hi <= 0) {
    p_left = 1.0 - std::expm1(-static_cast<double>(hi - mid) / scale) /
                       std::expm1(-static_cast<double>(hi - lo) / scale);
  } else {
    const double total = LaplaceMass(lo - 0.5, hi - 0.5, 0.0, scale);
    p_left = LaplaceMass(lo - 0.5, mid - 0.5, 0.0, scale) / total;
  }
  if (!std::isfinite(p_left)) p_left = 0.5;
  const long long count = std::llround(p_left * kProbabilityTotal);
  return static_cast<uint32_t>(
      std::clamp<long long>(count, 1, kProbabilityTotal - 1));
}

float PopulationStdDev(std::span<const double> values) {
  if (values.empty()) return 0.0f;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return static_cast<float>(std::sqrt(var));
}

}  // namespace

MlpWeights QuantizedMlp::Dequantize() const {
  std::vector<double> values(quanta.size());
  const double delta = step();
  for (size_t i = 0; i < quanta.size(); ++i) values[i] = delta * quanta[i];
  MlpWeights w = MlpWeights::Unflatten(arch, values);
  w.step = delta;
  return w;
}

QuantizedMlp QuantizeWeights(const MlpWeights& weights, int step_index) {
  CheckStepIndex(step_index);
  const double delta = kWeightSteps[step_index];
  QuantizedMlp q;
  q.arch = weights.arch;
  q.step_index = step_index;
  const std::vector<double> flat = weights.Flatten();
  q.quanta.reserve(flat.size());
  std::vector<double> dequantized;
  dequantized.reserve(flat.size());
  for (double v : flat) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite MLP weight");
    }
    const double r = RoundHalfAwayFromZero(v / delta);
    if (std::fabs(r) >= kQuantumLimit) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weight too large for quantization step");
    }
    q.quanta.push_back(static_cast<int32_t>(r));
    dequantized.push_back(delta * r);
  }
  q.sigma = PopulationStdDev(dequantized);
  return q;
}

double WeightModelScale(float sigma, double step) {
  const double s = std::max(static_cast<double>(sigma), 1e-6 * step);
  return s / std::numbers::sqrt2 / step;
}

double WeightRateBits(const QuantizedMlp& q) {
  const double scale = WeightModelScale(q.sigma, q.step());
  double bits = 0.0;
  for (int32_t v : q.quanta) {
    const double mass = LaplaceMass(v - 0.5, v + 0.5, 0.0, scale);
    bits -= std::log2(std::clamp(mass, std::numeric_limits<double>::min(), 1.0));
  }
  return bits;
}

std::vector<uint8_t> EncodeWeights(const QuantizedMlp& q) {
  const double scale = WeightModelScale(q.sigma, q.step());
  RangeEncoder encoder;
  for (int32_t v : q.quanta) {
    int64_t lo = -kQuantumLimit;
    int64_t hi = kQuantumLimit;
    while (hi - lo > 1) {
      const int64_t mid = lo + (hi - lo) / 2;
      const bool upper = v >= mid;
      encoder.EncodeBit(upper, SplitZeroCount(lo, mid, hi, scale));
      (upper ? lo : hi) = mid;
    }
  }
  return encoder.Finish();
}

QuantizedMlp DecodeWeights(std::span<const uint8_t> payload,
                           const MlpArchitecture& arch, int step_index,
                           float sigma) {
  CheckStepIndex(step_index);
  if (!std::isfinite(sigma) || sigma < 0.0f) {
    throw Error(ErrorCode::kCorruptStream, "invalid weight scale in header");
  }
  QuantizedMlp q;
  q.arch = arch;
  q.step_index = step_index;
  q.sigma = sigma;
  const double scale = WeightModelScale(sigma, q.step());
  RangeDecoder decoder(payload);
  const size_t n = ParamCount(arch);
  q.quanta.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    int64_t lo = -kQuantumLimit;
    int64_t hi = kQuantumLimit;
    while (hi - lo > 1) {
      const int64_t mid = lo + (hi - lo) / 2;
      (decoder.DecodeBit(SplitZeroCount(lo, mid, hi, scale)) ? lo : hi) = mid;
    }
    q.quanta.push_back(static_cast<int32_t>(lo));
  }
  decoder.Finish();
  return q;
}

StepSearchResult SearchSteps(const StepSearchInput& input,
                             std::span<const int> candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty quantization step grid");
  }
  if (input.latents->mode() != LatentMode::kInteger) {
    throw Error(ErrorCode::kInvalidArgument, "step search needs quantized latents");
  }
  std::vector<int> order(candidates.begin(), candidates.end());
  for (int index : order) CheckStepIndex(index);
  std::sort(order.begin(), order.end());  // coarsest step first
  order.erase(std::unique(order.begin(), order.end()), order.end());

  const double inf = std::numeric_limits<double>::infinity();
  const Image& image = *input.image;
  const double pixels = static_cast<double>(image.pixel_count());
  const DenseLatent dense = BuildDense(*input.latents);

  // Distortion depends only on the synthesis step and latent rate only on
  // the ARM step, so each is measured once per step and then combined.
  struct Partial {
    double value = 0.0;  // distortion or latent bits
    double mlp_bits = 0.0;
    bool ok = false;
  };
  std::vector<Partial> synthesis_partial(order.size());
  std::vector<Partial> arm_partial(order.size());
  for (size_t s = 0; s < order.size(); ++s) {
    try {
      const QuantizedMlp q = QuantizeWeights(*input.synthesis, order[s]);
      const Image recon = Synthesize(dense, q.Dequantize());
      synthesis_partial[s] = {MeanSquaredError(image, recon) / (255.0 * 255.0),
                              WeightRateBits(q), true};
    } catch (const Error&) {
    }
    try {
      const QuantizedMlp q = QuantizeWeights(*input.arm, order[s]);
      arm_partial[s] = {RateBits(*input.latents, q.Dequantize(), *input.pattern),
                        WeightRateBits(q), true};
    } catch (const Error&) {
    }
  }

  StepSearchResult result;
  result.best.cost = inf;
  for (size_t s = 0; s < order.size(); ++s) {
    for (size_t a = 0; a < order.size(); ++a) {
      StepPairCost pair;
      pair.synthesis_step_index = order[s];
      pair.arm_step_index = order[a];
      if (synthesis_partial[s].ok && arm_partial[a].ok) {
        pair.distortion = synthesis_partial[s].value;
        pair.latent_bits = arm_partial[a].value;
        pair.mlp_bits = synthesis_partial[s].mlp_bits + arm_partial[a].mlp_bits;
        pair.cost = pair.distortion +
                    input.lambda * (pair.latent_bits + pair.mlp_bits) / pixels;
      } else {
        pair.cost = inf;
      }
      if (!std::isfinite(pair.cost)) pair.cost = inf;
      if (pair.cost < result.best.cost) result.best = pair;
      result.evaluated.push_back(pair);
    }
  }
  if (!std::isfinite(result.best.cost)) {
    throw Error(ErrorCode::kDivergence,
                "no quantization step pair gives a finite cost");
  }
  return result;
}

}  // namespace coolcodec
