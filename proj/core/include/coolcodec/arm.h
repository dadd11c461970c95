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

#ifndef COOLCODEC_ARM_H_
#define COOLCODEC_ARM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "coolcodec/latent.h"
#include "coolcodec/mlp.h"

namespace coolcodec {

struct ContextOffset {
  int di = 0;
  int dj = 0;
  friend bool operator==(const ContextOffset&, const ContextOffset&) = default;
};

// Ordered causal neighbourhood. Every offset precedes (0, 0) in raster
// order, so a raster-order decoder always has the context available.
class ContextPattern {
 public:
  // Throws Error{kInvalidArgument} on a non-causal offset.
  explicit ContextPattern(std::vector<ContextOffset> offsets);

  // The 12-pixel layout carried by bitstream version 1:
  //   row i-2: dj = -2..2, row i-1: dj = -2..2, row i: dj = -2, -1.
  static ContextPattern Default();

  int size() const { return static_cast<int>(offsets_.size()); }
  const std::vector<ContextOffset>& offsets() const { return offsets_; }

 private:
  std::vector<ContextOffset> offsets_;
};

// Reads the pattern around (i, j) from a single grid; positions outside the
// grid read as 0.
void ExtractContext(const Grid& grid, int i, int j, const ContextPattern& pattern,
                    std::span<double> out);
std::vector<double> ExtractContext(const Grid& grid, int i, int j,
                                   const ContextPattern& pattern);

inline constexpr double kMinLaplaceScale = 1e-3;
inline constexpr double kMaxLaplaceScale = 150.0;
inline constexpr double kProbabilityFloor = 0x1.0p-16;

struct LaplaceParams {
  double mu = 0.0;
  double scale = 1.0;  // Laplace b, clamped to [kMinLaplaceScale, kMaxLaplaceScale]
};

// mu = raw[0], b = clamp(exp(raw[1])). Throws Error{kInvalidArgument} on a
// non-finite network output.
LaplaceParams LaplaceFromNetwork(double mu_output, double log_scale_output);

LaplaceParams Predict(const MlpWeights& arm, std::span<const double> context,
                      uint64_t* mac_counter = nullptr);

double LaplaceCdf(double x, const LaplaceParams& p);

// Mass of [lo, hi] under Laplace(mu, b), computed on whichever side of mu
// avoids cancellation.
double LaplaceMass(double lo, double hi, double mu, double scale);

// F(v + 0.5) - F(v - 0.5), floored at kProbabilityFloor and capped at 1.
double LaplaceProb(double v, const LaplaceParams& p);

// -log2 LaplaceProb(v) and its partial derivatives. The derivatives are
// zero while the floor is active.
struct RateTerm {
  double bits = 0.0;
  double d_value = 0.0;
  double d_mu = 0.0;
  double d_scale = 0.0;
};
RateTerm LaplaceRateTerm(double v, double mu, double scale);

// Sum over channels and raster positions of -log2 p(v | context). Works on
// continuous or integer pyramids; the context is read from the same values
// being scored.
double RateBits(const LatentPyramid& latents, const MlpWeights& arm,
                const ContextPattern& pattern);
double ChannelRateBits(const Grid& grid, const MlpWeights& arm,
                       const ContextPattern& pattern);

}  // namespace coolcodec

#endif  // COOLCODEC_ARM_H_
