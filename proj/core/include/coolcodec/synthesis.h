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

#ifndef COOLCODEC_SYNTHESIS_H_
#define COOLCODEC_SYNTHESIS_H_

#include <cstdint>

#include "coolcodec/image.h"
#include "coolcodec/mlp.h"
#include "coolcodec/upsample.h"

namespace coolcodec {

// Runs the synthesis MLP on every dense pixel, clamps to [0, 1] and maps to
// 8 bits with round-half-away-from-zero.
Image Synthesize(const DenseLatent& dense, const MlpWeights& synthesis,
                 uint64_t* mac_counter = nullptr);

// Converts an 8-bit sample to the [0, 1] training domain.
inline double SampleToUnit(uint8_t v) { return static_cast<double>(v) / 255.0; }
uint8_t UnitToSample(double v);

}  // namespace coolcodec

#endif  // COOLCODEC_SYNTHESIS_H_
