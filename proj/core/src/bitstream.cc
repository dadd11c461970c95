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

#include "coolcodec/bitstream.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "coolcodec/error.h"
#include "coolcodec/latent.h"
#include "coolcodec/weight_codec.h"

namespace coolcodec {
namespace {

class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) {
    U8(static_cast<uint8_t>(v));
    U8(static_cast<uint8_t>(v >> 8));
  }
  void U32(uint32_t v) {
    U16(static_cast<uint16_t>(v));
    U16(static_cast<uint16_t>(v >> 16));
  }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void Bytes(std::span<const uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void Substream(std::span<const uint8_t> b) {
    U32(static_cast<uint32_t>(b.size()));
    Bytes(b);
  }
  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t U8() {
    Need(1);
    return in_[pos_++];
  }
  uint16_t U16() {
    const uint16_t lo = U8();
    return static_cast<uint16_t>(lo | (U8() << 8));
  }
  uint32_t U32() {
    const uint32_t lo = U16();
    return lo | (static_cast<uint32_t>(U16()) << 16);
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::vector<uint8_t> Substream() {
    const uint32_t size = U32();
    Need(size);
    std::vector<uint8_t> out(in_.begin() + pos_, in_.begin() + pos_ + size);
    pos_ += size;
    return out;
  }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  void Need(size_t n) {
    if (in_.size() - pos_ < n) {
      throw Error(ErrorCode::kCorruptStream, "truncated stream");
    }
  }

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptStream, what);
}

StreamHeader ReadHeader(ByteReader& reader) {
  for (uint8_t m : kStreamMagic) {
    if (reader.U8() != m) Corrupt("bad magic");
  }
  StreamHeader h;
  h.version = reader.U8();
  if (h.version != kStreamVersion) {
    Corrupt("unsupported version " + std::to_string(h.version));
  }
  h.height = reader.U16();
  h.width = reader.U16();
  h.num_levels = reader.U8();
  h.num_contexts = reader.U8();
  h.hidden_width = reader.U8();
  h.synthesis_step_index = reader.U8();
  h.arm_step_index = reader.U8();
  h.synthesis_sigma = reader.F32();
  h.arm_sigma = reader.F32();
  if (h.height == 0 || h.width == 0) Corrupt("empty image dimensions");
  if (static_cast<uint64_t>(h.height) * h.width > kMaxStreamPixels) {
    Corrupt("image too large");
  }
  if (h.num_levels < 1 || h.num_levels > 16) Corrupt("bad latent level count");
  if (h.num_contexts != 12) Corrupt("unsupported context size");
  if (h.hidden_width < 1 || h.hidden_width > 64) Corrupt("bad hidden width");
  if (h.synthesis_step_index >= kWeightSteps.size() ||
      h.arm_step_index >= kWeightSteps.size()) {
    Corrupt("bad quantization step index");
  }
  for (float s : {h.synthesis_sigma, h.arm_sigma}) {
    if (!std::isfinite(s) || s < 0.0f) Corrupt("bad weight scale");
  }
  h.amplitudes.resize(h.num_levels);
  for (uint16_t& a : h.amplitudes) {
    a = reader.U16();
    if (a > kMaxLatentAmplitude) Corrupt("latent amplitude out of range");
  }
  return h;
}

}  // namespace

std::vector<uint8_t> SerializeContainer(const Container& c) {
  const StreamHeader& h = c.header;
  if (h.amplitudes.size() != h.num_levels ||
      c.latent_channels.size() != h.num_levels) {
    throw Error(ErrorCode::kInternal, "container level count mismatch");
  }
  ByteWriter w;
  w.Bytes(kStreamMagic);
  w.U8(h.version);
  w.U16(h.height);
  w.U16(h.width);
  w.U8(h.num_levels);
  w.U8(h.num_contexts);
  w.U8(h.hidden_width);
  w.U8(h.synthesis_step_index);
  w.U8(h.arm_step_index);
  w.F32(h.synthesis_sigma);
  w.F32(h.arm_sigma);
  for (uint16_t a : h.amplitudes) w.U16(a);
  w.Substream(c.arm_weights);
  w.Substream(c.synthesis_weights);
  for (const auto& channel : c.latent_channels) w.Substream(channel);
  return w.Take();
}

StreamHeader ParseHeader(std::span<const uint8_t> bytes) {
  ByteReader reader(bytes);
  return ReadHeader(reader);
}

Container ParseContainer(std::span<const uint8_t> bytes) {
  ByteReader reader(bytes);
  Container c;
  c.header = ReadHeader(reader);
  c.arm_weights = reader.Substream();
  c.synthesis_weights = reader.Substream();
  for (int k = 0; k < c.header.num_levels; ++k) {
    c.latent_channels.push_back(reader.Substream());
  }
  if (reader.remaining() != 0) Corrupt("trailing bytes after last substream");
  return c;
}

}  // namespace coolcodec
