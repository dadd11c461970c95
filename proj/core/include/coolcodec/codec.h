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

#ifndef COOLCODEC_CODEC_H_
#define COOLCODEC_CODEC_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "coolcodec/arm.h"
#include "coolcodec/bitstream.h"
#include "coolcodec/image.h"
#include "coolcodec/latent.h"
#include "coolcodec/mlp.h"
#include "coolcodec/weight_codec.h"

namespace coolcodec {

// Constant peak rate for the first constant_fraction of the iterations,
// then a cosine decay to final_rate.
struct LearningRateSchedule {
  double peak_rate = 1e-2;
  double final_rate = 1e-4;
  double constant_fraction = 0.9;

  double RateAt(long iteration, long total_iterations) const;
};

// Quality presets 1 (smallest file) .. 5 (best quality).
inline constexpr std::array<double, 5> kQualityLambdas = {0.02, 0.004, 0.001,
                                                          0.0004, 0.0001};
double LambdaForQuality(int quality);

struct EncodeConfig {
  // Weight of the rate (bits per pixel) against MSE on [0, 1] samples.
  double lambda = 1e-3;
  long iterations = 40000;
  LearningRateSchedule schedule;
  int num_levels = 7;
  int num_contexts = 12;
  int hidden_width = 12;
  uint64_t seed = 0;
  // Trailing share of iterations that also scores the truly quantized
  // model and keeps the best parameters seen.
  double quantized_eval_fraction = 0.02;
  // Indices into kWeightSteps tried by the step search.
  std::vector<int> step_candidates = {0, 1, 2, 3, 4, 5, 6, 7, 8};

  // Throws Error{kInvalidArgument}.
  void Validate() const;
};

struct RdReport {
  double psnr_db = 0.0;
  double bpp_total = 0.0;
  double bpp_latent = 0.0;  // latent substreams incl. their length prefixes
  double bpp_mlp = 0.0;     // both weight substreams incl. length prefixes
  double bpp_header = 0.0;  // fixed header
  long iterations = 0;
  double seconds = 0.0;
  double lambda = 0.0;
  uint64_t seed = 0;

  size_t header_bytes = 0;
  size_t mlp_bytes = 0;
  size_t latent_bytes = 0;
  size_t total_bytes = 0;
};

// Accounting from actual substream lengths. psnr_db is left at 0 unless
// both images are given.
RdReport EstimateRateReport(std::span<const uint8_t> stream,
                            const Image* original = nullptr,
                            const Image* decoded = nullptr);

struct TrainingSample {
  long iteration = 0;
  double loss = 0.0;
  double learning_rate = 0.0;
};
using TrainingObserver = std::function<void(const TrainingSample&)>;

struct EncodeResult {
  std::vector<uint8_t> stream;
  RdReport report;
  // What the decoder will reproduce: quantized latents and dequantized
  // networks, synthesized through the inference path.
  Image reconstruction;
  LatentPyramid latents;
  MlpWeights synthesis;
  MlpWeights arm;
  // Networks as trained, before the step search quantized them.
  MlpWeights trained_synthesis;
  MlpWeights trained_arm;
  StepSearchResult step_search;
  // Sum of -log2 p over all latents under the quantized ARM.
  double estimated_latent_bits = 0.0;
  int restarts = 0;
};

// Overfits latents and both networks to `image`, picks weight steps and
// writes the stream. Throws Error{kDivergence} if training produces NaN
// twice (the retry runs at a fifth of the learning rate).
EncodeResult Encode(const Image& image, const EncodeConfig& config,
                    const TrainingObserver& observer = {});

struct DecodeOptions {
  // <= 0: COOLCODEC_THREADS if set, else hardware concurrency. Channels are
  // the unit of parallelism; the output does not depend on the count.
  int threads = 0;
  // Incremented by every synthesis and ARM multiply-accumulate.
  uint64_t* mac_counter = nullptr;
};

struct DecodedStream {
  Image image;
  Container container;
  LatentPyramid latents;
  MlpWeights synthesis;
  MlpWeights arm;
};

// Throws Error{kCorruptStream} on malformed or inconsistent input.
DecodedStream DecodeDetailed(std::span<const uint8_t> stream,
                             const DecodeOptions& options = {});
Image Decode(std::span<const uint8_t> stream, const DecodeOptions& options = {});

// Raster-order coding of one integer latent channel under the ARM.
std::vector<uint8_t> EncodeLatentChannel(const Grid& channel, int amplitude,
                                         const MlpWeights& arm,
                                         const ContextPattern& pattern);
Grid DecodeLatentChannel(std::span<const uint8_t> payload, int height, int width,
                         int amplitude, const MlpWeights& arm,
                         const ContextPattern& pattern,
                         uint64_t* mac_counter = nullptr);

int ResolveThreadCount(int requested);

}  // namespace coolcodec

#endif  // COOLCODEC_CODEC_H_
