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

#ifndef PLD_AUTODIFF_H_
#define PLD_AUTODIFF_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pld/ops.h"
#include "pld/tensor.h"

namespace pld {

// Trainable tensor. `grad` always has the shape of `value`.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  std::string name;
  Tensor value;
  Tensor grad;
};

void ZeroGrads(std::span<Parameter> params);

// Handle to a node recorded on a Tape.
class Var {
 public:
  Var() = default;
  std::size_t index() const { return index_; }

 private:
  friend class Tape;
  explicit Var(std::size_t index) : index_(index) {}
  std::size_t index_ = static_cast<std::size_t>(-1);
};

// Reverse-mode recorder for the small op set the model uses. Values are
// computed eagerly; Backward() walks the recording in reverse and adds
// d(loss)/d(param) into every Parameter that reached the loss.
//
// Parameter gradients accumulate across Backward() calls until ZeroGrads().
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  // The parameter must outlive the tape.
  Var Param(Parameter& param);

  Var Conv3d(Var input, Var weight, Var bias, const Conv3dParams& params);
  Var Upsample3dNearest(Var input, const Triple& factors);
  Var Relu(Var input);
  Var Sigmoid(Var input);
  Var Reshape(Var input, std::vector<int> shape);
  // Scalar (shape {1}) mean squared error.
  Var MseLoss(Var prediction, Var target);

  const Tensor& value(Var v) const { return nodes_.at(v.index()).value; }
  std::size_t size() const { return nodes_.size(); }
  // First value of `v`, or the unrounded double result for reductions that
  // keep one (MseLoss).
  double ScalarValue(Var v) const;

  // One flag per relu input value, in recording order: 1 where the input is
  // > 0. Two recordings share a pattern iff every relu picked the same piece.
  std::vector<std::uint8_t> ActivationPattern() const;

  // `loss` must hold exactly one value.
  void Backward(Var loss);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::optional<double> exact;
    // Input of a relu node; the point where it is non-differentiable.
    std::optional<std::size_t> kink_input;
    bool requires_grad = false;
    Parameter* param = nullptr;
    std::function<void(Tape&, std::size_t)> backward;
  };

  Var Push(Node node);
  Tensor& GradOf(std::size_t index);
  bool RequiresGrad(Var v) const { return nodes_[v.index()].requires_grad; }

  std::vector<Node> nodes_;
};

}  // namespace pld

#endif  // PLD_AUTODIFF_H_
