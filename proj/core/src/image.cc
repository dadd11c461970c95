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
#include "coolcodec/image.h"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "coolcodec/error.h"

namespace coolcodec {
namespace {

std::vector<uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFile(const std::filesystem::path& path,
               const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

bool IsPngSignature(const std::vector<uint8_t>& bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

// Reads PNG through libpng's simplified API, which normalizes palette,
// grayscale and alpha layouts for us.
Image DecodePng(const std::vector<uint8_t>& bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kIo, std::string("malformed PNG: ") + png.message);
  }
  if (PNG_IMAGE_SAMPLE_COMPONENT_SIZE(png.format) != 1) {
    png_image_free(&png);
    throw Error(ErrorCode::kIo, "unsupported PNG bit depth (need 8-bit)");
  }
  png.format = PNG_FORMAT_RGB;
  Image image(static_cast<int>(png.height), static_cast<int>(png.width), 3);
  if (!png_image_finish_read(&png, nullptr, image.samples.data(), 0,
                             nullptr)) {
    std::string message = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::kIo, "PNG decode failed: " + message);
  }
  return image;
}

std::vector<uint8_t> EncodePng(const Image& image) {
  if (image.channels != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PNG writer expects RGB");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png, size, 0, image.samples.data(), 0,
                                       nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") +
                                    png.message);
  }
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0,
                                 image.samples.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") +
                                    png.message);
  }
  out.resize(size);
  return out;
}

// Netpbm header tokens may be separated by arbitrary whitespace and '#'
// comments.
class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(const std::vector<uint8_t>& bytes)
      : bytes_(bytes) {}

  long NextInt() {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::kIo, "malformed PPM header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 30)) throw Error(ErrorCode::kIo, "PPM field overflow");
    }
    return value;
  }

  size_t pos() const { return pos_; }
  void Skip(size_t n) { pos_ += n; }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<uint8_t>& bytes_;
  size_t pos_ = 0;
};

}  // namespace

Image::Image(int h, int w, int c) : height(h), width(w), channels(c) {
  if (h <= 0 || w <= 0 || c <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions must be positive");
  }
  samples.assign(static_cast<size_t>(h) * w * c, 0);
}

Image ReadPpm(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorCode::kIo, "not a binary PPM (P6) file");
  }
  PpmHeaderReader header(bytes);
  header.Skip(2);
  const long width = header.NextInt();
  const long height = header.NextInt();
  const long maxval = header.NextInt();
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kIo, "empty PPM");
  if (maxval != 255) {
    throw Error(ErrorCode::kIo, "unsupported PPM bit depth (maxval " +
                                    std::to_string(maxval) + ")");
  }
  // Exactly one whitespace byte separates the header from the raster.
  header.Skip(1);
  Image image(static_cast<int>(height), static_cast<int>(width), 3);
  if (bytes.size() < header.pos() + image.samples.size()) {
    throw Error(ErrorCode::kIo, "truncated PPM raster");
  }
  std::memcpy(image.samples.data(), bytes.data() + header.pos(),
              image.samples.size());
  return image;
}

std::vector<uint8_t> WritePpm(const Image& image) {
  if (image.channels != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PPM writer expects RGB");
  }
  const std::string header = "P6\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.samples.begin(), image.samples.end());
  return out;
}

Image LoadImage(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = ReadFile(path);
  if (IsPngSignature(bytes)) return DecodePng(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P') return ReadPpm(bytes);
  throw Error(ErrorCode::kIo, "unrecognized image format: " + path.string());
}

void SaveImage(const Image& image, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  WriteFile(path, ext == ".png" ? EncodePng(image) : WritePpm(image));
}

double MeanSquaredError(const Image& a, const Image& b) {
  if (a.height != b.height || a.width != b.width || a.channels != b.channels) {
    throw Error(ErrorCode::kInvalidArgument, "image dimension mismatch");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - b.samples[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.samples.size());
}

double Psnr(const Image& a, const Image& b) {
  const double mse = MeanSquaredError(a, b);
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double BitsPerPixel(uint64_t stream_bits, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bpp needs a positive pixel count");
  }
  return static_cast<double>(stream_bits) /
         (static_cast<double>(height) * width);
}

double BitsPerPixel(uint64_t stream_bits, const Image& image) {
  return BitsPerPixel(stream_bits, image.height, image.width);
}

}  // namespace coolcodec
