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
#include <string>

#include "coolcodec/error.h"
#include "coolcodec/grad.h"

namespace coolcodec::grad {

void AdamStep(AdamOptimizer& opt, std::span<Parameter* const> params) {
  for (size_t p = 0; p < params.size(); ++p) {
    for (size_t i = 0; i < params[p]->gradient.size(); ++i) {
      if (!std::isfinite(params[p]->gradient[i])) {
        throw Error(ErrorCode::kDivergence,
                    "non-finite gradient in parameter " + std::to_string(p) +
                        " element " + std::to_string(i));
      }
    }
  }
  if (opt.first_moment.size() != params.size()) {
    opt.first_moment.assign(params.size(), {});
    opt.second_moment.assign(params.size(), {});
  }
  for (size_t p = 0; p < params.size(); ++p) {
    if (opt.first_moment[p].size() != params[p]->size()) {
      opt.first_moment[p].assign(params[p]->size(), 0.0);
      opt.second_moment[p].assign(params[p]->size(), 0.0);
    }
  }

  ++opt.step_count;
  const double t = static_cast<double>(opt.step_count);
  const double correction1 = 1.0 - std::pow(opt.beta1, t);
  const double correction2 = 1.0 - std::pow(opt.beta2, t);
  for (size_t p = 0; p < params.size(); ++p) {
    auto& values = params[p]->values;
    const auto& grad = params[p]->gradient;
    auto& m = opt.first_moment[p];
    auto& v = opt.second_moment[p];
    for (size_t i = 0; i < values.size(); ++i) {
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * grad[i];
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= opt.learning_rate * m_hat / (std::sqrt(v_hat) + opt.epsilon);
    }
  }
}

}  // namespace coolcodec::grad
