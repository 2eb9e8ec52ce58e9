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

#ifndef PLD_OPS_H_
#define PLD_OPS_H_

#include <array>

#include "pld/tensor.h"

namespace pld {

// (time, height, width) triple used for strides, paddings, kernel and
// upsampling factors.
using Triple = std::array<int, 3>;

struct Conv3dParams {
  Triple stride{1, 1, 1};
  Triple padding{0, 0, 0};
};

// Output extent along one axis: floor((in + 2*pad - kernel) / stride) + 1.
int ConvOutputExtent(int in, int kernel, int stride, int pad);

// Cross-correlation of input [Cin x T x H x W] with weight
// [Cout x Cin x kT x kH x kW] plus bias [Cout], zero padding.
Tensor Conv3d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              const Conv3dParams& params);

// Accumulates into the non-null gradient outputs, which must already have the
// shapes of input / weight / bias.
void Conv3dBackward(const Tensor& input, const Tensor& weight,
                    const Conv3dParams& params, const Tensor& grad_output,
                    Tensor* grad_input, Tensor* grad_weight,
                    Tensor* grad_bias);

// Nearest-neighbour upsampling of [C x T x H x W] by integer factors.
Tensor Upsample3dNearest(const Tensor& input, const Triple& factors);
// Sums each replicated block back onto its source voxel.
Tensor Upsample3dNearestBackward(const Tensor& grad_output,
                                 const Triple& factors);

Tensor Relu(const Tensor& input);
Tensor Sigmoid(const Tensor& input);

// Mean of squared differences. Shapes must match exactly. The sum is
// accumulated in double; MseLossExact returns it before rounding to float.
float MseLoss(const Tensor& prediction, const Tensor& target);
double MseLossExact(const Tensor& prediction, const Tensor& target);

}  // namespace pld

#endif  // PLD_OPS_H_
