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

#ifndef COOLCODEC_IMAGE_H_
#define COOLCODEC_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

namespace coolcodec {

// 8-bit interleaved raster, row-major, channels contiguous per pixel.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 3;
  std::vector<uint8_t> samples;

  Image() = default;
  Image(int h, int w, int c);

  size_t pixel_count() const { return static_cast<size_t>(height) * width; }
  uint8_t& at(int i, int j, int c) {
    return samples[(static_cast<size_t>(i) * width + j) * channels + c];
  }
  uint8_t at(int i, int j, int c) const {
    return samples[(static_cast<size_t>(i) * width + j) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// Reads binary PPM (P6, maxval 255) or 8-bit PNG. Grayscale and alpha PNGs
// are expanded / stripped to RGB. Throws Error{kIo} on anything else.
Image LoadImage(const std::filesystem::path& path);

// Format picked from the extension: ".png" writes PNG, anything else P6.
void SaveImage(const Image& image, const std::filesystem::path& path);

Image ReadPpm(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> WritePpm(const Image& image);

// Mean squared error over every sample, in 8-bit units.
double MeanSquaredError(const Image& a, const Image& b);

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

// 10*log10(255^2 / MSE) over all samples jointly; kInfinitePsnr when equal.
double Psnr(const Image& a, const Image& b);

double BitsPerPixel(uint64_t stream_bits, const Image& image);
double BitsPerPixel(uint64_t stream_bits, int height, int width);

}  // namespace coolcodec

#endif  // COOLCODEC_IMAGE_H_
