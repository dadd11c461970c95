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
#include <filesystem>

#include <gtest/gtest.h>

#include "coolcodec/error.h"
#include "coolcodec/image.h"
#include "test_util.h"

namespace coolcodec {
namespace {

namespace fs = std::filesystem;

fs::path TempPath(const std::string& name) {
  return fs::path(::testing::TempDir()) / name;
}

TEST(ImageIoTest, LoadsOneWhitePixelPpm) {
  const fs::path path = TempPath("white.ppm");
  const std::string text = "P6\n1 1\n255\n\xff\xff\xff";
  testing::WriteBytes(path, std::vector<uint8_t>(text.begin(), text.end()));
  const Image image = LoadImage(path);
  EXPECT_EQ(image.height, 1);
  EXPECT_EQ(image.width, 1);
  EXPECT_EQ(image.channels, 3);
  EXPECT_EQ(image.samples, (std::vector<uint8_t>{255, 255, 255}));
}

TEST(ImageIoTest, PpmHeaderCommentsAreSkipped) {
  const std::string text = "P6 # comment\n2 # w\n1\n255\n\x01\x02\x03\x04\x05\x06";
  const Image image = ReadPpm(std::vector<uint8_t>(text.begin(), text.end()));
  EXPECT_EQ(image.width, 2);
  EXPECT_EQ(image.at(0, 1, 2), 6);
}

TEST(ImageIoTest, GradientRoundTripsThroughPpmAndPng) {
  Image image(2, 2, 3);
  for (size_t i = 0; i < image.samples.size(); ++i) {
    image.samples[i] = static_cast<uint8_t>(i * 20);
  }
  for (const char* name : {"grad.ppm", "grad.png"}) {
    const fs::path path = TempPath(name);
    SaveImage(image, path);
    EXPECT_EQ(LoadImage(path), image) << name;
  }
}

TEST(ImageIoTest, SaveLoadIsIdentityOnRandomImages) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Image image(1 + static_cast<int>(rng.Next() % 40),
                1 + static_cast<int>(rng.Next() % 40), 3);
    for (uint8_t& s : image.samples) s = static_cast<uint8_t>(rng.Next());
    for (const char* name : {"rand.ppm", "rand.png"}) {
      SaveImage(image, TempPath(name));
      EXPECT_EQ(LoadImage(TempPath(name)), image);
    }
  }
}

TEST(ImageIoTest, LargePngKeepsOrientation) {
  // 768 x 512 landscape and its portrait transpose.
  for (auto [h, w] : {std::pair{512, 768}, std::pair{768, 512}}) {
    Image image(h, w, 3);
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < w; ++j) {
        for (int c = 0; c < 3; ++c) image.at(i, j, c) = static_cast<uint8_t>(i + j + c);
      }
    }
    SaveImage(image, TempPath("large.png"));
    const Image loaded = LoadImage(TempPath("large.png"));
    EXPECT_EQ(loaded.height, h);
    EXPECT_EQ(loaded.width, w);
    EXPECT_EQ(loaded.channels, 3);
    EXPECT_EQ(loaded, image);
  }
}

TEST(ImageIoTest, FixturesLoadAsRgb) {
  const Image image = LoadImage(testing::FixturePath("astronaut_192.png"));
  EXPECT_EQ(image.height, 192);
  EXPECT_EQ(image.width, 192);
  EXPECT_EQ(image.channels, 3);
}

TEST(ImageIoTest, MalformedInputsRaiseIoErrors) {
  const auto expect_io = [](const std::string& text) {
    try {
      ReadPpm(std::vector<uint8_t>(text.begin(), text.end()));
      FAIL() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIo);
    }
  };
  expect_io("P5\n1 1\n255\n\x00");
  expect_io("P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00");
  expect_io("P6\n2 2\n255\n\x00\x00\x00");
  expect_io("P6\n0 1\n255\n");
  expect_io("");
  try {
    LoadImage(TempPath("does_not_exist.ppm"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(PsnrTest, IdenticalImagesAreInfinite) {
  const Image a = testing::SyntheticImage(8, 8, 1);
  EXPECT_EQ(Psnr(a, a), kInfinitePsnr);
  EXPECT_TRUE(std::isinf(Psnr(a, a)));
}

TEST(PsnrTest, BlackVersusWhiteIsZeroDecibels) {
  Image a(4, 4, 3), b(4, 4, 3);
  std::fill(b.samples.begin(), b.samples.end(), 255);
  EXPECT_DOUBLE_EQ(Psnr(a, b), 0.0);
}

TEST(PsnrTest, UnitOffsetMatchesClosedForm) {
  Image a = testing::SyntheticImage(16, 16, 2);
  for (uint8_t& s : a.samples) s = std::min<uint8_t>(s, 254);
  Image b = a;
  for (uint8_t& s : b.samples) s += 1;
  EXPECT_DOUBLE_EQ(MeanSquaredError(a, b), 1.0);
  EXPECT_NEAR(Psnr(a, b), 20.0 * std::log10(255.0), 1e-12);
  EXPECT_NEAR(Psnr(a, b), 48.13, 0.005);
}

TEST(PsnrTest, DimensionMismatchIsRejected) {
  EXPECT_THROW(Psnr(Image(2, 2, 3), Image(2, 3, 3)), Error);
}

TEST(BitsPerPixelTest, Examples) {
  EXPECT_DOUBLE_EQ(BitsPerPixel(512, Image(16, 16, 3)), 2.0);
  EXPECT_DOUBLE_EQ(BitsPerPixel(0, Image(16, 16, 3)), 0.0);
  EXPECT_DOUBLE_EQ(BitsPerPixel(8 * 1000, 10, 20), 40.0);
}

}  // namespace
}  // namespace coolcodec
