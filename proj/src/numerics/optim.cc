/* Copyright 2026 The PLD Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "pld/optim.h"

#include "pld/error.h"

namespace pld {

Sgd::Sgd(float lr, float momentum) : lr_(lr), momentum_(momentum) {
  if (!(lr >= 0.0f) || !(momentum >= 0.0f && momentum < 1.0f)) {
    throw Error(ErrorCode::kConfig,
                "sgd needs lr >= 0 and momentum in [0, 1)");
  }
}

void Sgd::Step(std::span<Parameter> params) {
  for (const Parameter& p : params) {
    if (!p.grad.AllFinite()) {
      throw Error(ErrorCode::kNonFinite,
                  "non-finite gradient in parameter '" + p.name +
                      "', step rejected");
    }
  }
  if (velocity_.empty()) {
    for (const Parameter& p : params) velocity_.emplace_back(p.value.shape());
  }
  if (velocity_.size() != params.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sgd called with a different parameter list");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    Tensor& v = velocity_[i];
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = momentum_ * v[k] + p.grad[k];
      p.value[k] -= lr_ * v[k];
    }
  }
}

}  // namespace pld
