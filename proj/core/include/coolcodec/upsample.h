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
#ifndef COOLCODEC_UPSAMPLE_H_
#define COOLCODEC_UPSAMPLE_H_

#include <array>
#include <span>
#include <vector>

#include "coolcodec/latent.h"

namespace coolcodec {

// Catmull-Rom (a = -0.5) taps for a x2 half-pixel-aligned upsampler.
// Output 2m reads inputs m-2..m+1; output 2m+1 reads m-1..m+2. All taps are
// dyadic rationals, so the weights themselves are exact.
inline constexpr std::array<double, 4> kEvenTaps = {-0.0234375, 0.2265625,
                                                    0.8671875, -0.0703125};
inline constexpr std::array<double, 4> kOddTaps = {-0.0703125, 0.8671875,
                                                   0.2265625, -0.0234375};

// Separable bicubic x2 upsampling with edge replication, cropped to
// out_height x out_width. Requires out extent in {2n-1, 2n} per axis.
Grid UpsampleX2(const Grid& in, int out_height, int out_width);

// Span versions used by the training graph. scratch is resized as needed;
// UpsampleX2Into overwrites out, UpsampleX2AdjointInto accumulates into
// grad_in.
void UpsampleX2Into(std::span<const double> in, int in_height, int in_width,
                    int out_height, int out_width, std::vector<double>& scratch,
                    std::span<double> out);
void UpsampleX2AdjointInto(std::span<const double> grad_out, int out_height,
                           int out_width, int in_height, int in_width,
                           std::vector<double>& scratch,
                           std::span<double> grad_in);

// Adjoint of UpsampleX2: accumulates d(out) back into grad_in (which must be
// sized like the forward input).
void UpsampleX2Adjoint(const Grid& grad_out, Grid& grad_in);

// The dense H x W x L tensor fed to the synthesis MLP, pixel-major.
struct DenseLatent {
  int height = 0;
  int width = 0;
  int num_levels = 0;
  std::vector<double> values;

  const double* pixel(size_t index) const {
    return values.data() + index * num_levels;
  }
};

// Upsamples channel k through k successive x2 passes, each targeting the
// next finer level's extent, and stacks channels 0..L-1 per pixel.
DenseLatent BuildDense(const LatentPyramid& latents);

// Single channel version of BuildDense: lifts the grid of a level to full size.
Grid UpsampleToFull(const Grid& grid, int level, int full_height,
                    int full_width);

}  // namespace coolcodec

#endif  // COOLCODEC_UPSAMPLE_H_
