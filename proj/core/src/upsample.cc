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

#include "coolcodec/upsample.h"

#include <algorithm>
#include <string>

#include "coolcodec/error.h"

namespace coolcodec {
namespace {

void CheckTarget(int in_extent, int out_extent) {
  if (out_extent != 2 * in_extent && out_extent != 2 * in_extent - 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "x2 upsample target " + std::to_string(out_extent) +
                    " incompatible with input " + std::to_string(in_extent));
  }
}

// Input index read by tap t (0..3) of output o, replicated at the borders.
inline int TapIndex(int o, int t, int n) {
  const int first = (o & 1) ? (o >> 1) - 1 : (o >> 1) - 2;
  return std::clamp(first + t, 0, n - 1);
}

inline const std::array<double, 4>& TapsFor(int o) {
  return (o & 1) ? kOddTaps : kEvenTaps;
}

}  // namespace

void UpsampleX2Into(std::span<const double> in, int in_height, int in_width,
                    int out_height, int out_width, std::vector<double>& scratch,
                    std::span<double> out) {
  if (in_height <= 0 || in_width <= 0 || in.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot upsample an empty grid");
  }
  CheckTarget(in_height, out_height);
  CheckTarget(in_width, out_width);

  // Horizontal pass into scratch: in_height x out_width.
  scratch.resize(static_cast<size_t>(in_height) * out_width);
  for (int i = 0; i < in_height; ++i) {
    const double* src = &in[static_cast<size_t>(i) * in_width];
    double* dst = &scratch[static_cast<size_t>(i) * out_width];
    for (int o = 0; o < out_width; ++o) {
      const auto& taps = TapsFor(o);
      double acc = 0.0;
      for (int t = 0; t < 4; ++t) acc += taps[t] * src[TapIndex(o, t, in_width)];
      dst[o] = acc;
    }
  }

  // Vertical pass.
  for (int o = 0; o < out_height; ++o) {
    const auto& taps = TapsFor(o);
    double* dst = &out[static_cast<size_t>(o) * out_width];
    const double* r0 = &scratch[static_cast<size_t>(TapIndex(o, 0, in_height)) * out_width];
    const double* r1 = &scratch[static_cast<size_t>(TapIndex(o, 1, in_height)) * out_width];
    const double* r2 = &scratch[static_cast<size_t>(TapIndex(o, 2, in_height)) * out_width];
    const double* r3 = &scratch[static_cast<size_t>(TapIndex(o, 3, in_height)) * out_width];
    for (int j = 0; j < out_width; ++j) {
      dst[j] = taps[0] * r0[j] + taps[1] * r1[j] + taps[2] * r2[j] +
               taps[3] * r3[j];
    }
  }
}

void UpsampleX2AdjointInto(std::span<const double> grad_out, int out_height,
                           int out_width, int in_height, int in_width,
                           std::vector<double>& scratch,
                           std::span<double> grad_in) {
  CheckTarget(in_height, out_height);
  CheckTarget(in_width, out_width);

  // Adjoint of the vertical pass.
  scratch.assign(static_cast<size_t>(in_height) * out_width, 0.0);
  for (int o = 0; o < out_height; ++o) {
    const auto& taps = TapsFor(o);
    const double* src = &grad_out[static_cast<size_t>(o) * out_width];
    for (int t = 0; t < 4; ++t) {
      const double w = taps[t];
      double* dst =
          &scratch[static_cast<size_t>(TapIndex(o, t, in_height)) * out_width];
      for (int j = 0; j < out_width; ++j) dst[j] += w * src[j];
    }
  }

  // Adjoint of the horizontal pass.
  for (int i = 0; i < in_height; ++i) {
    const double* src = &scratch[static_cast<size_t>(i) * out_width];
    double* dst = &grad_in[static_cast<size_t>(i) * in_width];
    for (int o = 0; o < out_width; ++o) {
      const auto& taps = TapsFor(o);
      for (int t = 0; t < 4; ++t) {
        dst[TapIndex(o, t, in_width)] += taps[t] * src[o];
      }
    }
  }
}

Grid UpsampleX2(const Grid& in, int out_height, int out_width) {
  Grid out(std::max(out_height, 0), std::max(out_width, 0));
  std::vector<double> scratch;
  UpsampleX2Into(in.values, in.height, in.width, out_height, out_width, scratch,
                 out.values);
  return out;
}

void UpsampleX2Adjoint(const Grid& grad_out, Grid& grad_in) {
  std::vector<double> scratch;
  UpsampleX2AdjointInto(grad_out.values, grad_out.height, grad_out.width,
                        grad_in.height, grad_in.width, scratch, grad_in.values);
}

Grid UpsampleToFull(const Grid& grid, int level, int full_height,
                    int full_width) {
  Grid current = grid;
  for (int k = level; k > 0; --k) {
    current = UpsampleX2(current, LevelExtent(full_height, k - 1),
                         LevelExtent(full_width, k - 1));
  }
  if (current.height != full_height || current.width != full_width) {
    throw Error(ErrorCode::kInternal, "dense latent bookkeeping mismatch");
  }
  return current;
}

DenseLatent BuildDense(const LatentPyramid& latents) {
  DenseLatent dense;
  dense.height = latents.height();
  dense.width = latents.width();
  dense.num_levels = latents.num_levels();
  const size_t n = static_cast<size_t>(dense.height) * dense.width;
  dense.values.assign(n * dense.num_levels, 0.0);
  for (int k = 0; k < dense.num_levels; ++k) {
    const Grid full =
        UpsampleToFull(latents.channel(k), k, dense.height, dense.width);
    for (size_t p = 0; p < n; ++p) {
      dense.values[p * dense.num_levels + k] = full.values[p];
    }
  }
  return dense;
}

}  // namespace coolcodec
