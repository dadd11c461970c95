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

#include <cstring>

#include <gtest/gtest.h>

#include "coolcodec/bitstream.h"
#include "coolcodec/error.h"
#include "coolcodec/latent.h"
#include "coolcodec/random.h"

namespace coolcodec {
namespace {

// Byte offsets of the fixed header fields.
constexpr size_t kVersionAt = 4;
constexpr size_t kHeightAt = 5;
constexpr size_t kLevelsAt = 9;
constexpr size_t kContextsAt = 10;
constexpr size_t kWidthFieldAt = 11;
constexpr size_t kStepAt = 12;
constexpr size_t kSigmaAt = 14;
constexpr size_t kAmplitudesAt = 22;

Container SampleContainer(int levels = 7) {
  Container c;
  c.header.height = 512;
  c.header.width = 768;
  c.header.num_levels = static_cast<uint8_t>(levels);
  c.header.num_contexts = 12;
  c.header.hidden_width = 12;
  c.header.synthesis_step_index = 3;
  c.header.arm_step_index = 5;
  c.header.synthesis_sigma = 0.125f;
  c.header.arm_sigma = 0.5f;
  Rng rng(90);
  for (int k = 0; k < levels; ++k) {
    c.header.amplitudes.push_back(static_cast<uint16_t>(k * 3));
    std::vector<uint8_t> payload(rng.Next() % 40);
    for (uint8_t& b : payload) b = static_cast<uint8_t>(rng.Next());
    c.latent_channels.push_back(payload);
  }
  c.arm_weights = {1, 2, 3};
  c.synthesis_weights = {};
  return c;
}

void ExpectCorrupt(const std::vector<uint8_t>& bytes) {
  try {
    ParseContainer(bytes);
    FAIL() << "accepted a malformed stream";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptStream) << e.what();
  }
}

TEST(BitstreamTest, RoundTrip) {
  for (int levels : {1, 4, 7, 16}) {
    const Container c = SampleContainer(levels);
    const std::vector<uint8_t> bytes = SerializeContainer(c);
    EXPECT_EQ(ParseContainer(bytes), c);
    EXPECT_EQ(ParseHeader(bytes), c.header);
  }
}

TEST(BitstreamTest, SizeAccounting) {
  const Container c = SampleContainer();
  EXPECT_EQ(c.header.SerializedSize(), 22u + 2u * 7u);
  size_t expected = c.header.SerializedSize() + 4 + c.arm_weights.size() + 4 +
                    c.synthesis_weights.size();
  for (const auto& ch : c.latent_channels) expected += 4 + ch.size();
  EXPECT_EQ(SerializeContainer(c).size(), expected);
}

TEST(BitstreamTest, LittleEndianLayout) {
  const std::vector<uint8_t> b = SerializeContainer(SampleContainer());
  EXPECT_EQ(std::memcmp(b.data(), "CCHC", 4), 0);
  EXPECT_EQ(b[kVersionAt], 1);
  EXPECT_EQ(b[kHeightAt], 0x00);
  EXPECT_EQ(b[kHeightAt + 1], 0x02);  // 512
  EXPECT_EQ(b[kHeightAt + 2], 0x00);
  EXPECT_EQ(b[kHeightAt + 3], 0x03);  // 768
  EXPECT_EQ(b[kLevelsAt], 7);
  EXPECT_EQ(b[kContextsAt], 12);
  EXPECT_EQ(b[kWidthFieldAt], 12);
  EXPECT_EQ(b[kStepAt], 3);
  EXPECT_EQ(b[kStepAt + 1], 5);
  float sigma = 0;
  std::memcpy(&sigma, &b[kSigmaAt], 4);
  EXPECT_EQ(sigma, 0.125f);
  EXPECT_EQ(b[kAmplitudesAt + 2], 3);  // amplitude of level 1
  // First substream prefix: ARM payload of 3 bytes.
  EXPECT_EQ(b[kAmplitudesAt + 14], 3);
  EXPECT_EQ(b[kAmplitudesAt + 15], 0);
}

TEST(BitstreamTest, RejectsHeaderFieldsOutOfRange) {
  const std::vector<uint8_t> good = SerializeContainer(SampleContainer());
  const auto mutate = [&](size_t at, uint8_t v) {
    std::vector<uint8_t> b = good;
    b[at] = v;
    return b;
  };
  ExpectCorrupt(mutate(0, 'X'));
  ExpectCorrupt(mutate(kVersionAt, 2));
  std::vector<uint8_t> zero_height = mutate(kHeightAt, 0);
  zero_height[kHeightAt + 1] = 0;
  ExpectCorrupt(zero_height);
  ExpectCorrupt(mutate(kLevelsAt, 0));
  ExpectCorrupt(mutate(kLevelsAt, 17));
  ExpectCorrupt(mutate(kContextsAt, 8));
  ExpectCorrupt(mutate(kWidthFieldAt, 0));
  ExpectCorrupt(mutate(kStepAt, 9));
  ExpectCorrupt(mutate(kStepAt + 1, 200));
  ExpectCorrupt(mutate(kSigmaAt + 3, 0xFF));  // NaN
  ExpectCorrupt(mutate(kSigmaAt + 3, 0xBF));  // negative
  std::vector<uint8_t> big_amp = mutate(kAmplitudesAt, 0xFF);
  big_amp[kAmplitudesAt + 1] = 0xFF;
  ExpectCorrupt(big_amp);
}

TEST(BitstreamTest, RejectsFramingErrors) {
  const std::vector<uint8_t> good = SerializeContainer(SampleContainer());
  std::vector<uint8_t> trailing = good;
  trailing.push_back(0);
  ExpectCorrupt(trailing);
  for (size_t n = 0; n < good.size(); ++n) {
    ExpectCorrupt(std::vector<uint8_t>(good.begin(), good.begin() + n));
  }
  // Inflated first substream length runs past the end.
  std::vector<uint8_t> inflated = good;
  inflated[kAmplitudesAt + 14 + 3] = 0x7F;
  ExpectCorrupt(inflated);
}

TEST(BitstreamTest, SerializerRejectsInconsistentContainer) {
  Container c = SampleContainer();
  c.latent_channels.pop_back();
  EXPECT_THROW(SerializeContainer(c), Error);
}

}  // namespace
}  // namespace coolcodec
