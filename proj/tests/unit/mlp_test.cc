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

#include <cmath>

#include <gtest/gtest.h>

#include "coolcodec/error.h"
#include "coolcodec/mlp.h"
#include "test_util.h"

namespace coolcodec {
namespace {

TEST(MlpArchitectureTest, ParameterCounts) {
  EXPECT_EQ(ParamCount(MlpArchitecture::Synthesis(7, 12)),
            size_t{(7 * 12 + 12) + (12 * 12 + 12) + (12 * 3 + 3)});
  EXPECT_EQ(ParamCount(MlpArchitecture::Synthesis(7, 12)), 291u);
  EXPECT_EQ(ParamCount(MlpArchitecture::Arm(12, 12)), 338u);
  EXPECT_EQ(ParamCount(MlpArchitecture::Synthesis(7, 12)) +
                ParamCount(MlpArchitecture::Arm(12, 12)),
            629u);
}

TEST(MlpArchitectureTest, MacCounts) {
  EXPECT_EQ(MacCount(MlpArchitecture::Synthesis(7, 12)), 84u + 144u + 36u);
  EXPECT_EQ(MacCount(MlpArchitecture::Arm(12, 12)), 144u + 144u + 24u);
  const double density = 1 + 1 / 4.0 + 1 / 16.0 + 1 / 64.0 + 1 / 256.0 +
                         1 / 1024.0 + 1 / 4096.0;
  const double mpp = MacPerPixel(MlpArchitecture::Synthesis(7, 12),
                                 MlpArchitecture::Arm(12, 12), 7);
  EXPECT_DOUBLE_EQ(mpp, 264.0 + 312.0 * density);
  EXPECT_NEAR(mpp, 680.0, 1.0);
}

TEST(MlpArchitectureTest, WidthsUpTo24) {
  const MlpArchitecture s = MlpArchitecture::Synthesis(7, 24);
  EXPECT_EQ(ParamCount(s), size_t{(7 * 24 + 24) + (24 * 24 + 24) + (24 * 3 + 3)});
  EXPECT_EQ(s.max_width(), 24);
}

TEST(MlpForwardTest, ZeroWeightsReturnBias) {
  MlpWeights w = MlpWeights::Zeros(MlpArchitecture::Arm(12, 12));
  w.layers.back().bias = {0.25, -1.5};
  const std::vector<double> in(12, 3.0);
  EXPECT_EQ(MlpForward(w, in), (std::vector<double>{0.25, -1.5}));
}

TEST(MlpForwardTest, HandComputedTwoNeuronPath) {
  // 1 -> 2 -> 2 -> 1 with a single positive path: x -> 2x + 1 -> 3(2x + 1)
  // -> 0.5 * 3(2x + 1) - 1.
  MlpArchitecture arch{1, {2, 2}, 1};
  MlpWeights w = MlpWeights::Zeros(arch);
  w.layers[0].weight = {2.0, 0.0};
  w.layers[0].bias = {1.0, 0.0};
  w.layers[1].weight = {3.0, 0.0, 0.0, 0.0};
  w.layers[2].weight = {0.5, 0.0};
  w.layers[2].bias = {-1.0};
  const std::vector<double> in = {2.0};
  EXPECT_DOUBLE_EQ(MlpForward(w, in)[0], 0.5 * 3.0 * 5.0 - 1.0);
  // Negative pre-activation is cut by the ReLU.
  const std::vector<double> neg = {-1.0};
  EXPECT_DOUBLE_EQ(MlpForward(w, neg)[0], -1.0);
}

TEST(MlpForwardTest, MatchesMatrixOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const MlpArchitecture arch = trial % 2 ? MlpArchitecture::Synthesis(7, 12)
                                           : MlpArchitecture::Arm(12, 16);
    const MlpWeights w = testing::RandomMlp(arch, rng);
    std::vector<double> in(arch.input_dim);
    for (double& v : in) v = rng.Uniform(-4, 4);
    const std::vector<double> got = MlpForward(w, in);
    const std::vector<double> want =
        oracle::MlpForward(testing::OracleLayers(w), in);
    for (size_t o = 0; o < got.size(); ++o) EXPECT_NEAR(got[o], want[o], 1e-12);
  }
}

TEST(MlpForwardTest, CountsMultiplies) {
  Rng rng(32);
  const MlpWeights w = testing::RandomMlp(MlpArchitecture::Synthesis(7, 12), rng);
  uint64_t macs = 0;
  std::vector<double> in(7, 0.5), out(3);
  MlpForward(w, in, out, &macs);
  MlpForward(w, in, out, &macs);
  EXPECT_EQ(macs, 2u * 264u);
}

TEST(MlpForwardTest, PositiveScalingOfLastLayerScalesOutputs) {
  Rng rng(33);
  MlpWeights w = testing::RandomMlp(MlpArchitecture::Synthesis(7, 12), rng);
  w.layers.back().bias.assign(3, 0.0);
  std::vector<double> in(7);
  for (double& v : in) v = rng.Uniform(-2, 2);
  const std::vector<double> base = MlpForward(w, in);
  for (double& v : w.layers.back().weight) v *= 2.5;
  const std::vector<double> scaled = MlpForward(w, in);
  for (int o = 0; o < 3; ++o) EXPECT_NEAR(scaled[o], 2.5 * base[o], 1e-12);
}

TEST(MlpForwardTest, PiecewiseLinearInInput) {
  // At a fixed activation pattern f(x + t d) is affine in t.
  Rng rng(34);
  const MlpWeights w = testing::RandomMlp(MlpArchitecture::Arm(12, 12), rng);
  std::vector<double> x(12), d(12);
  for (double& v : x) v = rng.Uniform(-1, 1);
  for (double& v : d) v = rng.Uniform(-1, 1);
  const auto at = [&](double t) {
    std::vector<double> p(12);
    for (int i = 0; i < 12; ++i) p[i] = x[i] + t * d[i];
    return MlpForward(w, p);
  };
  const double t = 1e-6;
  const auto f0 = at(0), f1 = at(t), f2 = at(2 * t);
  for (int o = 0; o < 2; ++o) {
    EXPECT_NEAR(f2[o] - f1[o], f1[o] - f0[o], 1e-12);
  }
}

TEST(MlpForwardTest, DimensionMismatchThrows) {
  const MlpWeights w = MlpWeights::Zeros(MlpArchitecture::Synthesis(7, 12));
  const std::vector<double> in(6, 0.0);
  EXPECT_THROW(MlpForward(w, in), Error);
}

TEST(MlpWeightsTest, RandomInitBoundsAndZeroBias) {
  Rng rng(35);
  const MlpWeights w = MlpWeights::RandomInit(MlpArchitecture::Arm(12, 12), rng);
  for (const DenseLayer& l : w.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
    for (double v : l.weight) EXPECT_LE(std::fabs(v), bound);
    for (double v : l.bias) EXPECT_EQ(v, 0.0);
  }
}

TEST(MlpWeightsTest, RandomInitIsSeeded) {
  Rng a(7), b(7);
  const MlpArchitecture arch = MlpArchitecture::Synthesis(7, 12);
  EXPECT_EQ(MlpWeights::RandomInit(arch, a).Flatten(),
            MlpWeights::RandomInit(arch, b).Flatten());
}

TEST(MlpWeightsTest, FlattenRoundTrip) {
  Rng rng(36);
  const MlpArchitecture arch = MlpArchitecture::Arm(12, 12);
  const MlpWeights w = testing::RandomMlp(arch, rng);
  const std::vector<double> flat = w.Flatten();
  ASSERT_EQ(flat.size(), ParamCount(arch));
  EXPECT_EQ(flat[0], w.layers[0].weight[0]);
  EXPECT_EQ(flat[144], w.layers[0].bias[0]);
  EXPECT_EQ(MlpWeights::Unflatten(arch, flat).Flatten(), flat);
  EXPECT_THROW(MlpWeights::Unflatten(arch, std::vector<double>(3)), Error);
}

}  // namespace
}  // namespace coolcodec
