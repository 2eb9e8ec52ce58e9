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

#ifndef PLD_OPTIM_H_
#define PLD_OPTIM_H_

#include <span>
#include <vector>

#include "pld/autodiff.h"

namespace pld {

// SGD with heavy-ball momentum:
//   velocity <- momentum * velocity + grad
//   value    <- value - lr * velocity
// With momentum 0 this is plain value <- value - lr * grad.
class Sgd {
 public:
  Sgd(float lr, float momentum);

  // Rejects the whole step (nothing is modified) if any gradient is
  // non-finite. The parameter list must be the same on every call.
  void Step(std::span<Parameter> params);

  float lr() const { return lr_; }
  float momentum() const { return momentum_; }

 private:
  float lr_;
  float momentum_;
  std::vector<Tensor> velocity_;
};

}  // namespace pld

#endif  // PLD_OPTIM_H_
