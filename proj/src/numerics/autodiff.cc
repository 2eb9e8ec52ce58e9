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

#include "pld/autodiff.h"

#include <utility>

#include "pld/error.h"

namespace pld {

Parameter::Parameter(std::string name, Tensor value)
    : name(std::move(name)), value(std::move(value)) {
  grad = Tensor(this->value.shape());
}

void ZeroGrads(std::span<Parameter> params) {
  for (Parameter& p : params) p.grad.Fill(0.0f);
}

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(nodes_.size() - 1);
}

Tensor& Tape::GradOf(std::size_t index) {
  Node& n = nodes_[index];
  if (n.grad.size() != n.value.size()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Param(Parameter& param) {
  Node n;
  n.value = param.value;
  n.requires_grad = true;
  n.param = &param;
  return Push(std::move(n));
}

Var Tape::Conv3d(Var input, Var weight, Var bias, const Conv3dParams& params) {
  Node n;
  n.value = pld::Conv3d(value(input), value(weight), value(bias), params);
  n.requires_grad =
      RequiresGrad(input) || RequiresGrad(weight) || RequiresGrad(bias);
  const std::size_t i = input.index(), w = weight.index(), b = bias.index();
  n.backward = [i, w, b, params](Tape& tape, std::size_t self) {
    auto& nodes = tape.nodes_;
    Tensor* gi = nodes[i].requires_grad ? &tape.GradOf(i) : nullptr;
    Tensor* gw = nodes[w].requires_grad ? &tape.GradOf(w) : nullptr;
    Tensor* gb = nodes[b].requires_grad ? &tape.GradOf(b) : nullptr;
    Conv3dBackward(nodes[i].value, nodes[w].value, params, nodes[self].grad,
                   gi, gw, gb);
  };
  return Push(std::move(n));
}

Var Tape::Upsample3dNearest(Var input, const Triple& factors) {
  Node n;
  n.value = pld::Upsample3dNearest(value(input), factors);
  n.requires_grad = RequiresGrad(input);
  const std::size_t i = input.index();
  n.backward = [i, factors](Tape& tape, std::size_t self) {
    const Tensor g =
        Upsample3dNearestBackward(tape.nodes_[self].grad, factors);
    Tensor& gi = tape.GradOf(i);
    for (std::size_t k = 0; k < g.size(); ++k) gi[k] += g[k];
  };
  return Push(std::move(n));
}

Var Tape::Relu(Var input) {
  Node n;
  n.value = pld::Relu(value(input));
  n.requires_grad = RequiresGrad(input);
  const std::size_t i = input.index();
  n.kink_input = i;
  n.backward = [i](Tape& tape, std::size_t self) {
    const Tensor& x = tape.nodes_[i].value;
    const Tensor& g = tape.nodes_[self].grad;
    Tensor& gi = tape.GradOf(i);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (x[k] > 0.0f) gi[k] += g[k];
    }
  };
  return Push(std::move(n));
}

Var Tape::Sigmoid(Var input) {
  Node n;
  n.value = pld::Sigmoid(value(input));
  n.requires_grad = RequiresGrad(input);
  const std::size_t i = input.index();
  n.backward = [i](Tape& tape, std::size_t self) {
    const Tensor& y = tape.nodes_[self].value;
    const Tensor& g = tape.nodes_[self].grad;
    Tensor& gi = tape.GradOf(i);
    for (std::size_t k = 0; k < g.size(); ++k) {
      gi[k] += g[k] * y[k] * (1.0f - y[k]);
    }
  };
  return Push(std::move(n));
}

Var Tape::Reshape(Var input, std::vector<int> shape) {
  Node n;
  n.value = value(input).Reshaped(std::move(shape));
  n.requires_grad = RequiresGrad(input);
  const std::size_t i = input.index();
  n.backward = [i](Tape& tape, std::size_t self) {
    const Tensor& g = tape.nodes_[self].grad;
    Tensor& gi = tape.GradOf(i);
    for (std::size_t k = 0; k < g.size(); ++k) gi[k] += g[k];
  };
  return Push(std::move(n));
}

Var Tape::MseLoss(Var prediction, Var target) {
  Node n;
  const double loss = MseLossExact(value(prediction), value(target));
  n.value = Tensor::Scalar(static_cast<float>(loss));
  n.exact = loss;
  n.requires_grad = RequiresGrad(prediction) || RequiresGrad(target);
  const std::size_t p = prediction.index(), t = target.index();
  n.backward = [p, t](Tape& tape, std::size_t self) {
    const Tensor& pv = tape.nodes_[p].value;
    const Tensor& tv = tape.nodes_[t].value;
    const float scale =
        2.0f * tape.nodes_[self].grad[0] / static_cast<float>(pv.size());
    if (tape.nodes_[p].requires_grad) {
      Tensor& gp = tape.GradOf(p);
      for (std::size_t k = 0; k < pv.size(); ++k) {
        gp[k] += scale * (pv[k] - tv[k]);
      }
    }
    if (tape.nodes_[t].requires_grad) {
      Tensor& gt = tape.GradOf(t);
      for (std::size_t k = 0; k < pv.size(); ++k) {
        gt[k] -= scale * (pv[k] - tv[k]);
      }
    }
  };
  return Push(std::move(n));
}

std::vector<std::uint8_t> Tape::ActivationPattern() const {
  std::vector<std::uint8_t> pattern;
  for (const Node& n : nodes_) {
    if (!n.kink_input) continue;
    for (float x : nodes_[*n.kink_input].value.data()) {
      pattern.push_back(x > 0.0f ? 1 : 0);
    }
  }
  return pattern;
}

double Tape::ScalarValue(Var v) const {
  const Node& n = nodes_.at(v.index());
  return n.exact ? *n.exact : static_cast<double>(n.value[0]);
}

void Tape::Backward(Var loss) {
  if (loss.index() >= nodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "backward on a foreign Var");
  }
  if (nodes_[loss.index()].value.size() != 1) {
    throw Error(ErrorCode::kShape, "backward needs a scalar loss, got " +
                                       ShapeToString(value(loss).shape()));
  }
  for (Node& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.index()].requires_grad) return;
  GradOf(loss.index())[0] = 1.0f;
  for (std::size_t k = loss.index() + 1; k-- > 0;) {
    Node& n = nodes_[k];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, k);
    if (n.param != nullptr) {
      Tensor& pg = n.param->grad;
      if (pg.shape() != n.value.shape()) pg = Tensor(n.value.shape());
      for (std::size_t j = 0; j < pg.size(); ++j) pg[j] += n.grad[j];
    }
  }
}

}  // namespace pld
