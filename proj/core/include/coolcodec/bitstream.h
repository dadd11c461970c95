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

#ifndef COOLCODEC_BITSTREAM_H_
#define COOLCODEC_BITSTREAM_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace coolcodec {

inline constexpr std::array<uint8_t, 4> kStreamMagic = {'C', 'C', 'H', 'C'};
inline constexpr uint8_t kStreamVersion = 1;
// Decoder-side allocation guard.
inline constexpr uint64_t kMaxStreamPixels = uint64_t{1} << 26;

// Fixed little-endian header:
//   magic "CCHC" | version u8 | H u16 | W u16 | L u8 | C u8 | width u8 |
//   synthesis step index u8 | ARM step index u8 | synthesis sigma f32 |
//   ARM sigma f32 | amplitude u16 x L
struct StreamHeader {
  uint8_t version = kStreamVersion;
  uint16_t height = 0;
  uint16_t width = 0;
  uint8_t num_levels = 0;
  uint8_t num_contexts = 0;
  uint8_t hidden_width = 0;
  uint8_t synthesis_step_index = 0;
  uint8_t arm_step_index = 0;
  float synthesis_sigma = 0.0f;
  float arm_sigma = 0.0f;
  std::vector<uint16_t> amplitudes;

  size_t SerializedSize() const { return 22 + 2 * amplitudes.size(); }
  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

// Header followed by u32-length-prefixed substreams in the order: ARM
// weights, synthesis weights, latent channels 0..L-1.
struct Container {
  StreamHeader header;
  std::vector<uint8_t> arm_weights;
  std::vector<uint8_t> synthesis_weights;
  std::vector<std::vector<uint8_t>> latent_channels;

  friend bool operator==(const Container&, const Container&) = default;
};

inline constexpr size_t kSubstreamPrefixBytes = 4;

std::vector<uint8_t> SerializeContainer(const Container& container);

// Structural validation only (magic, version, field ranges, framing that
// exactly covers the input). Throws Error{kCorruptStream}.
Container ParseContainer(std::span<const uint8_t> bytes);
StreamHeader ParseHeader(std::span<const uint8_t> bytes);

}  // namespace coolcodec

#endif  // COOLCODEC_BITSTREAM_H_
