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
#include "coolcodec/random.h"
#include "coolcodec/range_coder.h"

namespace coolcodec {
namespace {

LaplaceParams RandomParams(Rng& rng) {
  return {rng.Uniform(-8, 8), std::exp(rng.Uniform(std::log(1e-3), std::log(150.0)))};
}

// Draws a symbol from the quantized model itself.
int SampleSymbol(const QuantizedCdf& cdf, Rng& rng) {
  return cdf.Lookup(static_cast<uint32_t>(rng.Next() & 0xFFFF));
}

TEST(BuildCdfTest, ZeroAmplitudeIsOneSymbol) {
  const QuantizedCdf cdf = BuildCdf({3.0, 0.5}, 0);
  EXPECT_EQ(cdf.num_symbols(), 1);
  EXPECT_EQ(cdf.count(0), kProbabilityTotal);
}

TEST(BuildCdfTest, HalfMassMiddleSymbol) {
  const QuantizedCdf cdf = BuildCdf({0.0, 0.72135}, 1);
  EXPECT_NEAR(static_cast<double>(cdf.count(0)), 32768.0, 1.0);
  EXPECT_EQ(cdf.count(-1), cdf.count(1));
}

TEST(BuildCdfTest, CountsArePositiveAndSumToTotal) {
  Rng rng(51);
  for (int trial = 0; trial < 3000; ++trial) {
    const int a = trial < 10 ? kMaxLatentAmplitude - trial
                             : static_cast<int>(rng.Next() % 300);
    const QuantizedCdf cdf = BuildCdf(RandomParams(rng), a);
    uint64_t total = 0;
    for (int v = -a; v <= a; ++v) {
      ASSERT_GE(cdf.count(v), 1u);
      total += cdf.count(v);
    }
    EXPECT_EQ(total, kProbabilityTotal);
    EXPECT_EQ(cdf.cumulative().front(), 0u);
    EXPECT_EQ(cdf.cumulative().back(), kProbabilityTotal);
  }
}

TEST(BuildCdfTest, TracksTheContinuousMass) {
  Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const LaplaceParams p{rng.Uniform(-3, 3), rng.Uniform(0.3, 5)};
    const int a = 20;
    const QuantizedCdf cdf = BuildCdf(p, a);
    for (int v = -a + 1; v < a; ++v) {
      // One reserved count per symbol plus two roundings; the remaining
      // 2^16 - 41 counts are spread proportionally.
      const double expected = LaplaceProb(v, p) * kProbabilityTotal;
      EXPECT_NEAR(static_cast<double>(cdf.count(v)), expected,
                  2.0 + 41.0 * expected / kProbabilityTotal);
    }
  }
}

TEST(BuildCdfTest, IsAPureFunctionOfItsInputs) {
  EXPECT_EQ(BuildCdf({0.3, 1.7}, 9).cumulative(), BuildCdf({0.3, 1.7}, 9).cumulative());
}

TEST(QuantizedCdfTest, RejectsInvalidTables) {
  EXPECT_THROW(QuantizedCdf(1, {0, 10, 10, 65536}), Error);
  EXPECT_THROW(QuantizedCdf(1, {0, 10, 20, 65535}), Error);
  EXPECT_THROW(QuantizedCdf(1, {1, 10, 20, 65536}), Error);
  EXPECT_THROW(QuantizedCdf(1, {0, 65536}), Error);
}

TEST(QuantizedCdfTest, LookupInvertsLow) {
  const QuantizedCdf cdf = BuildCdf({1.0, 2.0}, 7);
  for (int v = -7; v <= 7; ++v) {
    EXPECT_EQ(cdf.Lookup(cdf.low(v)), v);
    EXPECT_EQ(cdf.Lookup(cdf.low(v) + cdf.count(v) - 1), v);
  }
}

TEST(RangeCoderTest, RandomSymbolsUnderRandomCdfsRoundTrip) {
  Rng rng(53);
  std::vector<QuantizedCdf> cdfs;
  for (int i = 0; i < 64; ++i) {
    cdfs.push_back(BuildCdf(RandomParams(rng), static_cast<int>(rng.Next() % 50)));
  }
  std::vector<int> which(100000), symbols(100000);
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) {
    which[i] = static_cast<int>(rng.Next() % cdfs.size());
    const QuantizedCdf& cdf = cdfs[which[i]];
    // Mix model-distributed symbols with arbitrary ones (including the
    // rarest) to exercise tiny intervals.
    symbols[i] = rng.Next() % 4 == 0
                     ? static_cast<int>(rng.Next() % cdf.num_symbols()) - cdf.amplitude()
                     : SampleSymbol(cdf, rng);
    enc.EncodeSymbol(symbols[i], cdf);
  }
  const std::vector<uint8_t> bytes = enc.Finish();
  RangeDecoder dec(bytes);
  for (size_t i = 0; i < symbols.size(); ++i) {
    ASSERT_EQ(dec.DecodeSymbol(cdfs[which[i]]), symbols[i]) << i;
  }
  EXPECT_NO_THROW(dec.Finish());
}

TEST(RangeCoderTest, UniformByteAlphabetCostsEightBitsPerSymbol) {
  // 256 equiprobable symbols (one extra sliver symbol never used).
  std::vector<uint32_t> cum(258);
  for (int i = 0; i <= 256; ++i) cum[i] = static_cast<uint32_t>(i) * 255;
  cum[257] = kProbabilityTotal;
  const QuantizedCdf cdf(128, cum);
  Rng rng(54);
  RangeEncoder enc;
  std::vector<int> symbols(10000);
  double ideal_bits = 0.0;
  for (int& s : symbols) {
    s = static_cast<int>(rng.Next() % 256) - 128;
    enc.EncodeSymbol(s, cdf);
    ideal_bits -= std::log2(cdf.count(s) / 65536.0);
  }
  const std::vector<uint8_t> bytes = enc.Finish();
  // Counts of 255/65536 carry log2(65536/255) = 8.006 bits each; the coder
  // has to match that to 0.1%.
  EXPECT_NEAR(static_cast<double>(bytes.size()) * 8.0, ideal_bits, 1e-3 * ideal_bits);
  RangeDecoder dec(bytes);
  for (int s : symbols) ASSERT_EQ(dec.DecodeSymbol(cdf), s);
  dec.Finish();
}

TEST(RangeCoderTest, PowerOfTwoUniformIsExactlyEightBits) {
  std::vector<uint32_t> cum(258);
  for (int i = 0; i <= 256; ++i) cum[i] = static_cast<uint32_t>(i) * 256;
  cum[256] = kProbabilityTotal - 1;
  cum[257] = kProbabilityTotal;
  const QuantizedCdf cdf(128, cum);
  Rng rng(55);
  RangeEncoder enc;
  for (int i = 0; i < 10000; ++i) {
    enc.EncodeSymbol(static_cast<int>(rng.Next() % 255) - 128, cdf);
  }
  EXPECT_NEAR(static_cast<double>(enc.Finish().size()), 10000.0, 10.0);
}

TEST(RangeCoderTest, InformationFreeStreamIsEmpty) {
  const QuantizedCdf cdf = BuildCdf({0.0, 1.0}, 0);
  RangeEncoder enc;
  for (int i = 0; i < 5000; ++i) enc.EncodeSymbol(0, cdf);
  const std::vector<uint8_t> bytes = enc.Finish();
  EXPECT_TRUE(bytes.empty());
  RangeDecoder dec(bytes);
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(dec.DecodeSymbol(cdf), 0);
  dec.Finish();
}

TEST(RangeCoderTest, LengthTracksIdealCodeLength) {
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    RangeEncoder enc;
    double ideal = 0.0;
    const int n = trial < 10 ? 10000 : static_cast<int>(rng.Next() % 500);
    for (int i = 0; i < n; ++i) {
      const QuantizedCdf cdf =
          BuildCdf(RandomParams(rng), static_cast<int>(rng.Next() % 20));
      const int v = SampleSymbol(cdf, rng);
      ideal -= std::log2(cdf.count(v) / 65536.0);
      enc.EncodeSymbol(v, cdf);
    }
    const double actual = 8.0 * static_cast<double>(enc.Finish().size());
    EXPECT_LE(actual, ideal + 64.0);
    if (n >= 10000) EXPECT_LE(actual, 1.01 * ideal);
  }
}

TEST(RangeCoderTest, BinaryDecisionsRoundTrip) {
  Rng rng(57);
  std::vector<std::pair<bool, uint32_t>> bits(50000);
  RangeEncoder enc;
  for (auto& [bit, zero] : bits) {
    zero = 1 + static_cast<uint32_t>(rng.Next() % 65535);
    bit = rng.Unit() * 65536.0 >= zero;
    enc.EncodeBit(bit, zero);
  }
  const std::vector<uint8_t> bytes = enc.Finish();
  RangeDecoder dec(bytes);
  for (const auto& [bit, zero] : bits) ASSERT_EQ(dec.DecodeBit(zero), bit);
  dec.Finish();
}

TEST(RangeCoderTest, TruncatedStreamIsCorrupt) {
  Rng rng(58);
  std::vector<QuantizedCdf> cdfs;
  std::vector<int> symbols;
  RangeEncoder enc;
  for (int i = 0; i < 2000; ++i) {
    cdfs.push_back(BuildCdf(RandomParams(rng), 10));
    symbols.push_back(SampleSymbol(cdfs.back(), rng));
    enc.EncodeSymbol(symbols.back(), cdfs.back());
  }
  const std::vector<uint8_t> bytes = enc.Finish();
  for (size_t keep : {bytes.size() - 1, bytes.size() / 2, size_t{0}}) {
    const std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + keep);
    try {
      RangeDecoder dec(cut);
      for (size_t i = 0; i < cdfs.size(); ++i) dec.DecodeSymbol(cdfs[i]);
      dec.Finish();
      FAIL() << "truncation to " << keep << " bytes went unnoticed";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCorruptStream);
    }
  }
}

TEST(RangeCoderTest, FlippedByteIsCorrupt) {
  Rng rng(59);
  std::vector<QuantizedCdf> cdfs;
  RangeEncoder enc;
  for (int i = 0; i < 3000; ++i) {
    cdfs.push_back(BuildCdf(RandomParams(rng), 6));
    enc.EncodeSymbol(SampleSymbol(cdfs.back(), rng), cdfs.back());
  }
  const std::vector<uint8_t> bytes = enc.Finish();
  int detected = 0;
  for (size_t pos = 0; pos < bytes.size(); pos += 7) {
    std::vector<uint8_t> bad = bytes;
    bad[pos] ^= 0x5A;
    try {
      RangeDecoder dec(bad);
      for (const QuantizedCdf& cdf : cdfs) dec.DecodeSymbol(cdf);
      dec.Finish();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCorruptStream);
      ++detected;
    }
  }
  EXPECT_EQ(detected, static_cast<int>((bytes.size() + 6) / 7));
}

TEST(RangeCoderTest, OutOfAlphabetSymbolIsRejected) {
  RangeEncoder enc;
  EXPECT_THROW(enc.EncodeSymbol(3, BuildCdf({0, 1}, 2)), Error);
}

}  // namespace
}  // namespace coolcodec
