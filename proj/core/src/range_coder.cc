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

#include "coolcodec/range_coder.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "coolcodec/error.h"

namespace coolcodec {
namespace {

constexpr uint32_t kTop = 1u << 24;
constexpr size_t kMaxOverread = 4;

}  // namespace

QuantizedCdf::QuantizedCdf(int amplitude, std::vector<uint32_t> cumulative)
    : amplitude_(amplitude), cumulative_(std::move(cumulative)) {
  if (amplitude_ < 0 || amplitude_ > kMaxLatentAmplitude) {
    throw Error(ErrorCode::kInvalidArgument,
                "CDF amplitude out of range: " + std::to_string(amplitude_));
  }
  if (cumulative_.size() != static_cast<size_t>(num_symbols()) + 1 ||
      cumulative_.front() != 0 || cumulative_.back() != kProbabilityTotal) {
    throw Error(ErrorCode::kInvalidArgument, "CDF total mass must be 2^16");
  }
  for (size_t i = 1; i < cumulative_.size(); ++i) {
    if (cumulative_[i] <= cumulative_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "CDF not strictly increasing");
    }
  }
}

int QuantizedCdf::Lookup(uint32_t target) const {
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  return static_cast<int>(it - cumulative_.begin()) - 1 - amplitude_;
}

QuantizedCdf BuildCdf(const LaplaceParams& params, int amplitude) {
  const int n = 2 * amplitude + 1;
  if (amplitude < 0 || amplitude > kMaxLatentAmplitude) {
    throw Error(ErrorCode::kInvalidArgument, "CDF amplitude out of range");
  }
  const double spare = static_cast<double>(kProbabilityTotal - n);
  std::vector<uint32_t> cumulative(n + 1);
  cumulative[0] = 0;
  for (int i = 1; i < n; ++i) {
    const double boundary = -amplitude + i - 0.5;
    const double mass_below = LaplaceCdf(boundary, params);
    cumulative[i] = static_cast<uint32_t>(i) +
                    static_cast<uint32_t>(std::llround(spare * mass_below));
  }
  cumulative[n] = kProbabilityTotal;
  return QuantizedCdf(amplitude, std::move(cumulative));
}

void RangeEncoder::PropagateCarry() {
  for (auto it = bytes_.rbegin(); it != bytes_.rend(); ++it) {
    if (++*it != 0) return;
  }
  throw Error(ErrorCode::kInternal, "range coder carry overflow");
}

void RangeEncoder::Encode(uint32_t cum_low, uint32_t count) {
  // FNV-1a style mixing of both interval fields.
  hash_ = (hash_ ^ cum_low) * 16777619u;
  hash_ = (hash_ ^ count) * 16777619u;
  informative_ |= count < kProbabilityTotal;
  Code(cum_low, count);
}

uint32_t RangeEncoder::CheckSymbol() const {
  return (hash_ ^ (hash_ >> 16)) & (kProbabilityTotal - 1);
}

void RangeEncoder::Code(uint32_t cum_low, uint32_t count) {
  const uint32_t r = range_ >> kProbabilityBits;
  const uint32_t old_low = low_;
  low_ += cum_low * r;
  if (low_ < old_low) PropagateCarry();
  range_ = count * r;
  while (range_ < kTop) {
    bytes_.push_back(static_cast<uint8_t>(low_ >> 24));
    low_ <<= 8;
    range_ <<= 8;
  }
}

void RangeEncoder::EncodeSymbol(int v, const QuantizedCdf& cdf) {
  if (v < -cdf.amplitude() || v > cdf.amplitude()) {
    throw Error(ErrorCode::kInvalidArgument,
                "symbol " + std::to_string(v) + " outside alphabet");
  }
  Encode(cdf.low(v), cdf.count(v));
}

void RangeEncoder::EncodeBit(bool bit, uint32_t zero_count) {
  if (bit) {
    Encode(zero_count, kProbabilityTotal - zero_count);
  } else {
    Encode(0, zero_count);
  }
}

std::vector<uint8_t> RangeEncoder::Finish() {
  if (informative_) Code(CheckSymbol(), 1);
  const uint64_t low = low_;
  const uint64_t high = low + range_;
  for (int k = 0; k <= 4; ++k) {
    const uint64_t unit = uint64_t{1} << (32 - 8 * k);
    uint64_t value = (low + unit - 1) / unit * unit;
    if (value >= high) continue;
    if (value >> 32) {
      PropagateCarry();
      value &= 0xFFFFFFFFu;
    }
    for (int b = 0; b < k; ++b) {
      bytes_.push_back(static_cast<uint8_t>(value >> (24 - 8 * b)));
    }
    break;
  }
  std::vector<uint8_t> out = std::move(bytes_);
  bytes_.clear();
  low_ = 0;
  range_ = 0xFFFFFFFFu;
  hash_ = kHashSeed;
  informative_ = false;
  return out;
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : bytes_(bytes) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | NextByte();
}

uint8_t RangeDecoder::NextByte() {
  const size_t pos = pos_++;
  if (pos < bytes_.size()) return bytes_[pos];
  if (pos >= bytes_.size() + kMaxOverread) {
    throw Error(ErrorCode::kCorruptStream, "range decoder ran past end of data");
  }
  return 0;
}

uint32_t RangeDecoder::Target() {
  step_ = range_ >> kProbabilityBits;
  const uint32_t target = code_ / step_;
  if (target >= kProbabilityTotal) {
    throw Error(ErrorCode::kCorruptStream, "range decoder desynchronized");
  }
  return target;
}

void RangeDecoder::Consume(uint32_t cum_low, uint32_t count) {
  shadow_.Encode(cum_low, count);
  code_ -= cum_low * step_;
  range_ = count * step_;
  while (range_ < kTop) {
    code_ = (code_ << 8) | NextByte();
    range_ <<= 8;
  }
}

int RangeDecoder::DecodeSymbol(const QuantizedCdf& cdf) {
  const int v = cdf.Lookup(Target());
  Consume(cdf.low(v), cdf.count(v));
  return v;
}

bool RangeDecoder::DecodeBit(uint32_t zero_count) {
  if (Target() < zero_count) {
    Consume(0, zero_count);
    return false;
  }
  Consume(zero_count, kProbabilityTotal - zero_count);
  return true;
}

void RangeDecoder::Finish() {
  if (shadow_.has_check()) {
    const uint32_t check = shadow_.CheckSymbol();
    step_ = range_ >> kProbabilityBits;
    if (code_ / step_ != check) {
      throw Error(ErrorCode::kCorruptStream, "payload check symbol mismatch");
    }
    code_ -= check * step_;
    range_ = step_;
    while (range_ < kTop) {
      code_ = (code_ << 8) | NextByte();
      range_ <<= 8;
    }
  }
  const std::vector<uint8_t> expected = shadow_.Finish();
  if (expected.size() != bytes_.size() ||
      !std::equal(expected.begin(), expected.end(), bytes_.begin())) {
    throw Error(ErrorCode::kCorruptStream,
                "payload does not match its decoded symbols");
  }
}

}  // namespace coolcodec
