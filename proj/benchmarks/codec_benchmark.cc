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
#include <vector>

#include <benchmark/benchmark.h>

#include "coolcodec/arm.h"
#include "coolcodec/codec.h"
#include "coolcodec/image.h"
#include "coolcodec/latent.h"
#include "coolcodec/mlp.h"
#include "coolcodec/random.h"
#include "coolcodec/range_coder.h"
#include "coolcodec/synthesis.h"
#include "coolcodec/upsample.h"

namespace coolcodec {
namespace {

Image NoiseImage(int h, int w, uint64_t seed) {
  Rng rng(seed);
  Image img(h, w, 3);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      for (int c = 0; c < 3; ++c) {
        const double v = 128 + 60 * std::sin(0.07 * i + c) * std::cos(0.05 * j) +
                         rng.Uniform(-10, 10);
        img.at(i, j, c) = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return img;
}

LatentPyramid RandomLatents(int h, int w, uint64_t seed) {
  Rng rng(seed);
  LatentPyramid y = LatentPyramid::Create(h, w, 7);
  for (int k = 0; k < 7; ++k) {
    for (double& v : y.channel(k).values) v = rng.Uniform(-3, 3);
  }
  return Quantize(y);
}

void BM_BuildDense(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0)), w = static_cast<int>(state.range(1));
  const LatentPyramid y = RandomLatents(h, w, 1);
  for (auto _ : state) benchmark::DoNotOptimize(BuildDense(y));
  state.SetItemsProcessed(state.iterations() * h * w);
}
BENCHMARK(BM_BuildDense)->Args({192, 192})->Args({512, 768})->Unit(benchmark::kMillisecond);

void BM_Synthesize(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0)), w = static_cast<int>(state.range(1));
  Rng rng(2);
  const DenseLatent dense = BuildDense(RandomLatents(h, w, 2));
  const MlpWeights syn = MlpWeights::RandomInit(MlpArchitecture::Synthesis(7, 12), rng);
  for (auto _ : state) benchmark::DoNotOptimize(Synthesize(dense, syn));
  state.SetItemsProcessed(state.iterations() * h * w);
}
BENCHMARK(BM_Synthesize)->Args({192, 192})->Args({512, 768})->Unit(benchmark::kMillisecond);

void BM_RangeEncode(benchmark::State& state) {
  Rng rng(3);
  std::vector<QuantizedCdf> cdfs;
  std::vector<int> symbols;
  for (int i = 0; i < 4096; ++i) {
    cdfs.push_back(BuildCdf({rng.Uniform(-2, 2), rng.Uniform(0.2, 5)}, 20));
    symbols.push_back(cdfs.back().Lookup(static_cast<uint32_t>(rng.Next() % 65536)));
  }
  for (auto _ : state) {
    RangeEncoder enc;
    for (size_t i = 0; i < symbols.size(); ++i) enc.EncodeSymbol(symbols[i], cdfs[i]);
    benchmark::DoNotOptimize(enc.Finish());
  }
  state.SetItemsProcessed(state.iterations() * symbols.size());
}
BENCHMARK(BM_RangeEncode);

void BM_BuildCdf(benchmark::State& state) {
  const int amplitude = static_cast<int>(state.range(0));
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildCdf({rng.Uniform(-2, 2), rng.Uniform(0.2, 5)}, amplitude));
  }
}
BENCHMARK(BM_BuildCdf)->Arg(2)->Arg(20)->Arg(200);

// Full decode of a 192 x 192 stream (ARM entropy decoding, upsampling,
// synthesis), single-threaded and with all channels in parallel.
void BM_Decode(benchmark::State& state) {
  static const std::vector<uint8_t> stream = [] {
    EncodeConfig cfg;
    cfg.iterations = 200;
    return Encode(NoiseImage(192, 192, 5), cfg).stream;
  }();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Decode(stream, {.threads = threads}));
  state.SetItemsProcessed(state.iterations() * 192 * 192);
}
BENCHMARK(BM_Decode)->Arg(1)->Arg(7)->Unit(benchmark::kMillisecond);

// Encoder cost per training iteration: the difference between runs of
// `iterations` and one iteration, so that setup and the step search cancel.
void BM_TrainingIteration(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0)), w = static_cast<int>(state.range(1));
  constexpr long kIterations = 6;
  const Image img = NoiseImage(h, w, 6);
  EncodeConfig longer, shorter;
  longer.iterations = kIterations;
  shorter.iterations = 1;
  double per_iteration = 0.0;
  for (auto _ : state) {
    const double a = Encode(img, longer).report.seconds;
    const double b = Encode(img, shorter).report.seconds;
    per_iteration = (a - b) / (kIterations - 1);
  }
  state.counters["s_per_iteration"] = per_iteration;
  state.counters["us_per_pixel_iteration"] = 1e6 * per_iteration / (h * w);
  state.counters["default_encode_minutes"] = per_iteration * EncodeConfig{}.iterations / 60;
}
BENCHMARK(BM_TrainingIteration)
    ->Args({64, 64})
    ->Args({192, 192})
    ->Args({512, 768})
    ->Iterations(1)
    ->Unit(benchmark::kSecond);

}  // namespace
}  // namespace coolcodec

BENCHMARK_MAIN();
