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

#ifndef COOLCODEC_RANGE_CODER_H_
#define COOLCODEC_RANGE_CODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "coolcodec/arm.h"

namespace coolcodec {

inline constexpr int kProbabilityBits = 16;
inline constexpr uint32_t kProbabilityTotal = 1u << kProbabilityBits;

// Cumulative counts over the alphabet [-A, A]: strictly increasing from 0 to
// 2^16, so every symbol has count >= 1.
class QuantizedCdf {
 public:
  // Validates monotonicity and total mass; throws Error{kInvalidArgument}.
  QuantizedCdf(int amplitude, std::vector<uint32_t> cumulative);

  int amplitude() const { return amplitude_; }
  int num_symbols() const { return 2 * amplitude_ + 1; }
  uint32_t low(int v) const { return cumulative_[v + amplitude_]; }
  uint32_t count(int v) const {
    return cumulative_[v + amplitude_ + 1] - cumulative_[v + amplitude_];
  }
  const std::vector<uint32_t>& cumulative() const { return cumulative_; }

  // Symbol whose interval [low, low + count) holds target (< 2^16).
  int Lookup(uint32_t target) const;

 private:
  int amplitude_;
  std::vector<uint32_t> cumulative_;
};

// Discretizes Laplace(mu, b) over [-A, A], tails folded into the end
// symbols. Each symbol gets one guaranteed count and the remaining
// 2^16 - (2A + 1) counts follow the rounded continuous CDF, so the result is
// a pure function of the (mu, b, A) bit patterns.
QuantizedCdf BuildCdf(const LaplaceParams& params, int amplitude);

// Carry-propagating byte-wise range encoder: 32-bit low/range, 16-bit
// probabilities, renormalized whenever range drops below 2^24. Every coded
// interval also feeds a running hash, and Finish codes a 16-bit check symbol
// derived from it at probability 2^-16 so that the decoder can reject
// payloads that decode to a different but well-formed symbol sequence. The
// check is skipped when every coded interval had probability one, which
// keeps information-free streams empty.
class RangeEncoder {
 public:
  void Encode(uint32_t cum_low, uint32_t count);
  // Throws Error{kInvalidArgument} when v lies outside the alphabet.
  void EncodeSymbol(int v, const QuantizedCdf& cdf);
  // Binary decision with P(bit == 0) = zero_count / 2^16, zero_count in
  // [1, 2^16 - 1].
  void EncodeBit(bool bit, uint32_t zero_count);

  // Codes the check symbol, then emits the shortest tail (0 to 4 bytes)
  // that pins the final interval, assuming the decoder reads zeros past the
  // end. Resets the encoder.
  std::vector<uint8_t> Finish();

  // Check symbol in [0, 2^16) for the intervals coded so far.
  uint32_t CheckSymbol() const;
  bool has_check() const { return informative_; }

 private:
  void Code(uint32_t cum_low, uint32_t count);
  void PropagateCarry();

  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t hash_ = kHashSeed;
  bool informative_ = false;
  std::vector<uint8_t> bytes_;

  static constexpr uint32_t kHashSeed = 2166136261u;
};

// Throws Error{kCorruptStream} when the stream cannot have come from
// RangeEncoder under the same models: out-of-range targets, reads more than
// four bytes past the end of the payload, or (at Finish) a wrong check
// symbol or a payload that differs from the re-encoding of the decoded
// symbols.
class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  int DecodeSymbol(const QuantizedCdf& cdf);
  bool DecodeBit(uint32_t zero_count);

  // Decodes and verifies the check symbol, then re-encodes every decoded
  // interval through a shadow encoder and requires the result to equal the
  // payload byte for byte.
  void Finish();

 private:
  uint32_t Target();
  void Consume(uint32_t cum_low, uint32_t count);
  uint8_t NextByte();

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t step_ = 0;
  RangeEncoder shadow_;
};

}  // namespace coolcodec

#endif  // COOLCODEC_RANGE_CODER_H_
