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
#include "coolcodec/latent.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "coolcodec/error.h"

namespace coolcodec {

int LevelExtent(int full_extent, int level) {
  // ceil(n / 2^k) without overflow for the sizes we accept.
  const long long denom = 1LL << level;
  return static_cast<int>((full_extent + denom - 1) / denom);
}

LatentPyramid LatentPyramid::Create(int height, int width, int num_levels) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "latent pyramid needs H, W > 0");
  }
  if (num_levels < 1 || num_levels > 30) {
    throw Error(ErrorCode::kInvalidArgument,
                "latent level count out of range: " + std::to_string(num_levels));
  }
  LatentPyramid p;
  p.height_ = height;
  p.width_ = width;
  p.mode_ = LatentMode::kContinuous;
  for (int k = 0; k < num_levels; ++k) {
    const int h = LevelExtent(height, k);
    const int w = LevelExtent(width, k);
    if (h <= 0 || w <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "latent level " +
                                                   std::to_string(k) + " is empty");
    }
    p.channels_.emplace_back(h, w);
  }
  p.amplitudes_.assign(num_levels, 0);
  return p;
}

LatentPyramid LatentPyramid::FromIntegerGrids(int height, int width,
                                              std::vector<Grid> grids,
                                              std::vector<int> amplitudes) {
  LatentPyramid p = Create(height, width, static_cast<int>(grids.size()));
  if (amplitudes.size() != grids.size()) {
    throw Error(ErrorCode::kInvalidArgument, "amplitude count mismatch");
  }
  for (size_t k = 0; k < grids.size(); ++k) {
    if (grids[k].height != p.channels_[k].height ||
        grids[k].width != p.channels_[k].width) {
      throw Error(ErrorCode::kInvalidArgument, "latent grid size mismatch");
    }
    for (double v : grids[k].values) {
      if (v != std::trunc(v) || std::fabs(v) > amplitudes[k]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "latent value outside the integer alphabet");
      }
    }
  }
  p.channels_ = std::move(grids);
  p.amplitudes_ = std::move(amplitudes);
  p.mode_ = LatentMode::kInteger;
  return p;
}

size_t LatentPyramid::total_size() const {
  size_t n = 0;
  for (const Grid& g : channels_) n += g.size();
  return n;
}

double RoundHalfAwayFromZero(double v) { return std::round(v); }

void RequireContinuous(const LatentPyramid& y) {
  if (y.mode() != LatentMode::kContinuous) {
    throw Error(ErrorCode::kInvalidArgument,
                "operation requires a continuous latent pyramid");
  }
}

LatentPyramid Quantize(const LatentPyramid& y) {
  RequireContinuous(y);
  LatentPyramid out = y;
  out.mode_ = LatentMode::kInteger;
  for (int k = 0; k < out.num_levels(); ++k) {
    int amplitude = 0;
    for (double& v : out.channels_[k].values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite latent value");
      }
      v = std::clamp(RoundHalfAwayFromZero(v),
                     static_cast<double>(-kMaxLatentAmplitude),
                     static_cast<double>(kMaxLatentAmplitude));
      amplitude = std::max(amplitude, static_cast<int>(std::fabs(v)));
    }
    out.amplitudes_[k] = amplitude;
  }
  return out;
}

}  // namespace coolcodec
