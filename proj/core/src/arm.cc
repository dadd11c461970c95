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

#include "coolcodec/arm.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coolcodec/error.h"

namespace coolcodec {

ContextPattern::ContextPattern(std::vector<ContextOffset> offsets)
    : offsets_(std::move(offsets)) {
  for (const ContextOffset& o : offsets_) {
    if (!(o.di < 0 || (o.di == 0 && o.dj < 0))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-causal context offset (" + std::to_string(o.di) + ", " +
                      std::to_string(o.dj) + ")");
    }
  }
}

ContextPattern ContextPattern::Default() {
  std::vector<ContextOffset> offsets;
  for (int di = -2; di <= -1; ++di) {
    for (int dj = -2; dj <= 2; ++dj) offsets.push_back({di, dj});
  }
  offsets.push_back({0, -2});
  offsets.push_back({0, -1});
  return ContextPattern(std::move(offsets));
}

void ExtractContext(const Grid& grid, int i, int j, const ContextPattern& pattern,
                    std::span<double> out) {
  const auto& offsets = pattern.offsets();
  for (size_t c = 0; c < offsets.size(); ++c) {
    const int r = i + offsets[c].di;
    const int s = j + offsets[c].dj;
    out[c] = (r >= 0 && r < grid.height && s >= 0 && s < grid.width)
                 ? grid.at(r, s)
                 : 0.0;
  }
}

std::vector<double> ExtractContext(const Grid& grid, int i, int j,
                                   const ContextPattern& pattern) {
  std::vector<double> out(pattern.size());
  ExtractContext(grid, i, j, pattern, out);
  return out;
}

LaplaceParams LaplaceFromNetwork(double mu_output, double log_scale_output) {
  if (!std::isfinite(mu_output) || !std::isfinite(log_scale_output)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite ARM output");
  }
  return {mu_output, std::clamp(std::exp(log_scale_output), kMinLaplaceScale,
                                kMaxLaplaceScale)};
}

LaplaceParams Predict(const MlpWeights& arm, std::span<const double> context,
                      uint64_t* mac_counter) {
  double raw[2];
  MlpForward(arm, context, raw, mac_counter);
  return LaplaceFromNetwork(raw[0], raw[1]);
}

double LaplaceCdf(double x, const LaplaceParams& p) {
  const double t = (x - p.mu) / p.scale;
  return t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
}

double LaplaceMass(double lo, double hi, double mu, double scale) {
  const double a = (lo - mu) / scale;
  const double b = (hi - mu) / scale;
  if (a >= 0.0) return -0.5 * std::exp(-a) * std::expm1(a - b);
  if (b <= 0.0) return -0.5 * std::exp(b) * std::expm1(a - b);
  return -0.5 * (std::expm1(-b) + std::expm1(a));
}

double LaplaceProb(double v, const LaplaceParams& p) {
  const double m = LaplaceMass(v - 0.5, v + 0.5, p.mu, p.scale);
  return std::clamp(m, kProbabilityFloor, 1.0);
}

RateTerm LaplaceRateTerm(double v, double mu, double scale) {
  const double lo = v - 0.5;
  const double hi = v + 0.5;
  const double mass = LaplaceMass(lo, hi, mu, scale);
  RateTerm term;
  if (mass <= kProbabilityFloor) {
    term.bits = -std::log2(kProbabilityFloor);
    return term;
  }
  if (mass >= 1.0) return term;
  term.bits = -std::log2(mass);

  const auto density = [&](double x) {
    return std::exp(-std::fabs(x - mu) / scale) / (2.0 * scale);
  };
  const double f_lo = density(lo);
  const double f_hi = density(hi);
  const double d_mass_d_value = f_hi - f_lo;
  // dF(x)/db = -f(x) (x - mu) / b
  const double d_mass_d_scale =
      (-f_hi * (hi - mu) + f_lo * (lo - mu)) / scale;
  const double d_bits_d_mass = -1.0 / (mass * std::numbers::ln2);
  term.d_value = d_bits_d_mass * d_mass_d_value;
  term.d_mu = -term.d_value;
  term.d_scale = d_bits_d_mass * d_mass_d_scale;
  return term;
}

double ChannelRateBits(const Grid& grid, const MlpWeights& arm,
                       const ContextPattern& pattern) {
  std::vector<double> context(pattern.size());
  double bits = 0.0;
  for (int i = 0; i < grid.height; ++i) {
    for (int j = 0; j < grid.width; ++j) {
      ExtractContext(grid, i, j, pattern, context);
      const LaplaceParams p = Predict(arm, context);
      bits -= std::log2(LaplaceProb(grid.at(i, j), p));
    }
  }
  return bits;
}

double RateBits(const LatentPyramid& latents, const MlpWeights& arm,
                const ContextPattern& pattern) {
  double bits = 0.0;
  for (const Grid& g : latents.channels()) {
    bits += ChannelRateBits(g, arm, pattern);
  }
  return bits;
}

}  // namespace coolcodec
