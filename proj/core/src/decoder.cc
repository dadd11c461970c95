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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "coolcodec/codec.h"
#include "coolcodec/error.h"
#include "coolcodec/range_coder.h"
#include "coolcodec/synthesis.h"
#include "coolcodec/upsample.h"

namespace coolcodec {

uint8_t UnitToSample(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<uint8_t>(RoundHalfAwayFromZero(clamped * 255.0));
}

Image Synthesize(const DenseLatent& dense, const MlpWeights& synthesis,
                 uint64_t* mac_counter) {
  if (synthesis.arch.input_dim != dense.num_levels ||
      synthesis.arch.output_dim != 3) {
    throw Error(ErrorCode::kInvalidArgument, "synthesis MLP shape mismatch");
  }
  Image image(dense.height, dense.width, 3);
  const size_t n = static_cast<size_t>(dense.height) * dense.width;
  double rgb[3];
  for (size_t p = 0; p < n; ++p) {
    MlpForward(synthesis,
               std::span<const double>(dense.pixel(p), dense.num_levels), rgb,
               mac_counter);
    for (int c = 0; c < 3; ++c) image.samples[p * 3 + c] = UnitToSample(rgb[c]);
  }
  return image;
}

std::vector<uint8_t> EncodeLatentChannel(const Grid& channel, int amplitude,
                                         const MlpWeights& arm,
                                         const ContextPattern& pattern) {
  RangeEncoder encoder;
  std::vector<double> context(pattern.size());
  for (int i = 0; i < channel.height; ++i) {
    for (int j = 0; j < channel.width; ++j) {
      ExtractContext(channel, i, j, pattern, context);
      const QuantizedCdf cdf = BuildCdf(Predict(arm, context), amplitude);
      encoder.EncodeSymbol(static_cast<int>(channel.at(i, j)), cdf);
    }
  }
  return encoder.Finish();
}

Grid DecodeLatentChannel(std::span<const uint8_t> payload, int height, int width,
                         int amplitude, const MlpWeights& arm,
                         const ContextPattern& pattern, uint64_t* mac_counter) {
  Grid channel(height, width);
  RangeDecoder decoder(payload);
  std::vector<double> context(pattern.size());
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      ExtractContext(channel, i, j, pattern, context);
      LaplaceParams params;
      try {
        params = Predict(arm, context, mac_counter);
      } catch (const Error& e) {
        throw Error(ErrorCode::kCorruptStream, e.what());
      }
      channel.at(i, j) = decoder.DecodeSymbol(BuildCdf(params, amplitude));
    }
  }
  decoder.Finish();
  return channel;
}

int ResolveThreadCount(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COOLCODEC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

DecodedStream DecodeDetailed(std::span<const uint8_t> stream,
                             const DecodeOptions& options) {
  DecodedStream out;
  out.container = ParseContainer(stream);
  const StreamHeader& h = out.container.header;
  const int levels = h.num_levels;

  const QuantizedMlp arm_q =
      DecodeWeights(out.container.arm_weights,
                    MlpArchitecture::Arm(h.num_contexts, h.hidden_width),
                    h.arm_step_index, h.arm_sigma);
  const QuantizedMlp synthesis_q = DecodeWeights(
      out.container.synthesis_weights,
      MlpArchitecture::Synthesis(levels, h.hidden_width),
      h.synthesis_step_index, h.synthesis_sigma);
  out.arm = arm_q.Dequantize();
  out.synthesis = synthesis_q.Dequantize();

  const ContextPattern pattern = ContextPattern::Default();
  std::vector<Grid> grids(levels);
  std::vector<uint64_t> macs(levels, 0);
  std::vector<std::exception_ptr> failures(levels);
  const auto decode_channel = [&](int k) {
    try {
      grids[k] = DecodeLatentChannel(
          out.container.latent_channels[k], LevelExtent(h.height, k),
          LevelExtent(h.width, k), h.amplitudes[k], out.arm, pattern,
          options.mac_counter ? &macs[k] : nullptr);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };

  const int threads = std::min(ResolveThreadCount(options.threads), levels);
  if (threads <= 1) {
    for (int k = 0; k < levels; ++k) decode_channel(k);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (int k = t; k < levels; k += threads) decode_channel(k);
      });
    }
    for (std::thread& w : workers) w.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<int> amplitudes(h.amplitudes.begin(), h.amplitudes.end());
  out.latents = LatentPyramid::FromIntegerGrids(h.height, h.width,
                                                std::move(grids), amplitudes);
  if (options.mac_counter) {
    for (uint64_t m : macs) *options.mac_counter += m;
  }
  out.image = Synthesize(BuildDense(out.latents), out.synthesis,
                         options.mac_counter);
  return out;
}

Image Decode(std::span<const uint8_t> stream, const DecodeOptions& options) {
  return DecodeDetailed(stream, options).image;
}

RdReport EstimateRateReport(std::span<const uint8_t> stream,
                            const Image* original, const Image* decoded) {
  const Container c = ParseContainer(stream);
  RdReport r;
  r.total_bytes = stream.size();
  r.header_bytes = c.header.SerializedSize();
  r.mlp_bytes = 2 * kSubstreamPrefixBytes + c.arm_weights.size() +
                c.synthesis_weights.size();
  for (const auto& channel : c.latent_channels) {
    r.latent_bytes += kSubstreamPrefixBytes + channel.size();
  }
  const int h = c.header.height;
  const int w = c.header.width;
  r.bpp_total = BitsPerPixel(8 * r.total_bytes, h, w);
  r.bpp_header = BitsPerPixel(8 * r.header_bytes, h, w);
  r.bpp_mlp = BitsPerPixel(8 * r.mlp_bytes, h, w);
  r.bpp_latent = BitsPerPixel(8 * r.latent_bytes, h, w);
  if (original && decoded) r.psnr_db = Psnr(*original, *decoded);
  return r;
}

}  // namespace coolcodec
