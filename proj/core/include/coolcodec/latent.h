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
#ifndef COOLCODEC_LATENT_H_
#define COOLCODEC_LATENT_H_

#include <concepts>
#include <vector>

namespace coolcodec {

// One 2-D latent grid, row-major.
struct Grid {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(int h, int w) : height(h), width(w), values(static_cast<size_t>(h) * w) {}

  size_t size() const { return values.size(); }
  double& at(int i, int j) { return values[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const {
    return values[static_cast<size_t>(i) * width + j];
  }
};

// Dimensions of level k for an H x W image: ceil(H / 2^k) x ceil(W / 2^k).
int LevelExtent(int full_extent, int level);

enum class LatentMode { kContinuous, kInteger };

// L grids at dyadically decreasing resolutions. In integer mode every value
// is an exact integer within [-amplitude[k], amplitude[k]].
class LatentPyramid {
 public:
  // Allocates zero-initialized continuous grids. Throws when a level would
  // be empty or num_levels < 1.
  static LatentPyramid Create(int height, int width, int num_levels);

  int height() const { return height_; }
  int width() const { return width_; }
  int num_levels() const { return static_cast<int>(channels_.size()); }
  LatentMode mode() const { return mode_; }

  Grid& channel(int k) { return channels_[k]; }
  const Grid& channel(int k) const { return channels_[k]; }
  const std::vector<Grid>& channels() const { return channels_; }

  // Only meaningful in integer mode.
  int amplitude(int k) const { return amplitudes_[k]; }
  const std::vector<int>& amplitudes() const { return amplitudes_; }

  size_t total_size() const;

  // Builds an integer-mode pyramid from explicit grids (decoder side).
  static LatentPyramid FromIntegerGrids(int height, int width,
                                        std::vector<Grid> grids,
                                        std::vector<int> amplitudes);

 private:
  friend LatentPyramid Quantize(const LatentPyramid&);
  template <typename Draw>
  friend LatentPyramid NoiseProxy(const LatentPyramid&, Draw&&);

  int height_ = 0;
  int width_ = 0;
  LatentMode mode_ = LatentMode::kContinuous;
  std::vector<Grid> channels_;
  std::vector<int> amplitudes_;
};

// Largest amplitude the 16-bit coder alphabet can carry (2A+1 <= 2^16).
inline constexpr int kMaxLatentAmplitude = 32767;

// Round half away from zero; the single rounding rule shared by encoder
// and decoder.
double RoundHalfAwayFromZero(double v);

// Integer-mode copy with each value rounded and clamped to
// [-kMaxLatentAmplitude, kMaxLatentAmplitude]; records per-channel max |v|.
// Throws on integer-mode or non-finite input.
LatentPyramid Quantize(const LatentPyramid& y);

void RequireContinuous(const LatentPyramid& y);

// y + u with u drawn from draw() (expected in [-0.5, 0.5]) independently
// per value.
template <typename Draw>
LatentPyramid NoiseProxy(const LatentPyramid& y, Draw&& draw) {
  RequireContinuous(y);
  LatentPyramid out = y;
  for (Grid& g : out.channels_) {
    for (double& v : g.values) v += draw();
  }
  return out;
}

}  // namespace coolcodec

#endif  // COOLCODEC_LATENT_H_
