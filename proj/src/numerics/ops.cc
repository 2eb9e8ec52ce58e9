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

#include "pld/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pld/error.h"

namespace pld {
namespace {

struct ConvGeometry {
  int cin, t, h, w;
  int cout, kt, kh, kw;
  int ot, oh, ow;
};

ConvGeometry CheckConv(const Tensor& input, const Tensor& weight,
                       const Conv3dParams& params) {
  if (input.ndim() != 4) {
    throw Error(ErrorCode::kShape, "conv3d input must be CxTxHxW, got " +
                                       ShapeToString(input.shape()));
  }
  if (weight.ndim() != 5) {
    throw Error(ErrorCode::kShape,
                "conv3d weight must be CoutxCinxkTxkHxkW, got " +
                    ShapeToString(weight.shape()));
  }
  if (input.dim(0) != weight.dim(1)) {
    throw Error(ErrorCode::kShape,
                "conv3d channel mismatch: input " +
                    ShapeToString(input.shape()) + " vs weight " +
                    ShapeToString(weight.shape()));
  }
  ConvGeometry g{};
  g.cin = input.dim(0);
  g.t = input.dim(1);
  g.h = input.dim(2);
  g.w = input.dim(3);
  g.cout = weight.dim(0);
  g.kt = weight.dim(2);
  g.kh = weight.dim(3);
  g.kw = weight.dim(4);
  g.ot = ConvOutputExtent(g.t, g.kt, params.stride[0], params.padding[0]);
  g.oh = ConvOutputExtent(g.h, g.kh, params.stride[1], params.padding[1]);
  g.ow = ConvOutputExtent(g.w, g.kw, params.stride[2], params.padding[2]);
  return g;
}

// Output positions o in [lo, hi) whose input tap o*stride - pad + k lies
// inside [0, in).
void ValidRange(int out, int in, int stride, int pad, int k, int* lo,
                int* hi) {
  // o*stride >= pad - k
  int first = pad - k;
  *lo = first <= 0 ? 0 : (first + stride - 1) / stride;
  // o*stride <= in - 1 + pad - k
  int last = in - 1 + pad - k;
  *hi = last < 0 ? 0 : std::min(out, last / stride + 1);
  if (*lo > *hi) *lo = *hi;
}

}  // namespace

int ConvOutputExtent(int in, int kernel, int stride, int pad) {
  if (stride < 1) {
    throw Error(ErrorCode::kShape, "conv3d stride must be >= 1");
  }
  if (pad < 0) throw Error(ErrorCode::kShape, "conv3d padding must be >= 0");
  if (kernel > in + 2 * pad) {
    throw Error(ErrorCode::kShape,
                "conv3d kernel " + std::to_string(kernel) +
                    " does not fit padded extent " +
                    std::to_string(in + 2 * pad));
  }
  return (in + 2 * pad - kernel) / stride + 1;
}

Tensor Conv3d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              const Conv3dParams& params) {
  const ConvGeometry g = CheckConv(input, weight, params);
  if (bias.size() != static_cast<std::size_t>(g.cout)) {
    throw Error(ErrorCode::kShape, "conv3d bias must have Cout=" +
                                       std::to_string(g.cout) + " values");
  }
  const auto [st, sh, sw] = params.stride;
  const auto [pt, ph, pw] = params.padding;
  Tensor out({g.cout, g.ot, g.oh, g.ow});
  const float* in = input.raw();
  const float* wt = weight.raw();
  float* o = out.raw();
  const std::size_t in_plane = static_cast<std::size_t>(g.h) * g.w;
  const std::size_t in_chan = in_plane * g.t;
  const std::size_t out_plane = static_cast<std::size_t>(g.oh) * g.ow;
  const std::size_t out_chan = out_plane * g.ot;

  for (int co = 0; co < g.cout; ++co) {
    float* oc = o + co * out_chan;
    std::fill(oc, oc + out_chan, bias[co]);
    for (int ci = 0; ci < g.cin; ++ci) {
      const float* ic = in + ci * in_chan;
      for (int kt = 0; kt < g.kt; ++kt) {
        int t_lo, t_hi;
        ValidRange(g.ot, g.t, st, pt, kt, &t_lo, &t_hi);
        for (int kh = 0; kh < g.kh; ++kh) {
          int h_lo, h_hi;
          ValidRange(g.oh, g.h, sh, ph, kh, &h_lo, &h_hi);
          for (int kw = 0; kw < g.kw; ++kw) {
            int w_lo, w_hi;
            ValidRange(g.ow, g.w, sw, pw, kw, &w_lo, &w_hi);
            const float k =
                wt[(((static_cast<std::size_t>(co) * g.cin + ci) * g.kt + kt) *
                        g.kh +
                    kh) *
                       g.kw +
                   kw];
            for (int ot = t_lo; ot < t_hi; ++ot) {
              const int it = ot * st - pt + kt;
              for (int oh = h_lo; oh < h_hi; ++oh) {
                const int ih = oh * sh - ph + kh;
                float* orow = oc + ot * out_plane + oh * g.ow;
                const float* irow = ic + it * in_plane + ih * g.w - pw + kw;
                if (sw == 1) {
                  for (int ow = w_lo; ow < w_hi; ++ow) orow[ow] += k * irow[ow];
                } else {
                  for (int ow = w_lo; ow < w_hi; ++ow) {
                    orow[ow] += k * irow[ow * sw];
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

void Conv3dBackward(const Tensor& input, const Tensor& weight,
                    const Conv3dParams& params, const Tensor& grad_output,
                    Tensor* grad_input, Tensor* grad_weight,
                    Tensor* grad_bias) {
  const ConvGeometry g = CheckConv(input, weight, params);
  if (grad_output.shape() != std::vector<int>{g.cout, g.ot, g.oh, g.ow}) {
    throw Error(ErrorCode::kShape, "conv3d grad_output shape mismatch");
  }
  const auto [st, sh, sw] = params.stride;
  const auto [pt, ph, pw] = params.padding;
  const std::size_t in_plane = static_cast<std::size_t>(g.h) * g.w;
  const std::size_t in_chan = in_plane * g.t;
  const std::size_t out_plane = static_cast<std::size_t>(g.oh) * g.ow;
  const std::size_t out_chan = out_plane * g.ot;
  const float* go = grad_output.raw();

  if (grad_bias != nullptr) {
    for (int co = 0; co < g.cout; ++co) {
      double s = 0.0;
      const float* gc = go + co * out_chan;
      for (std::size_t i = 0; i < out_chan; ++i) s += gc[i];
      (*grad_bias)[co] += static_cast<float>(s);
    }
  }
  if (grad_input == nullptr && grad_weight == nullptr) return;

  const float* in = input.raw();
  const float* wt = weight.raw();
  float* gi = grad_input ? grad_input->raw() : nullptr;
  float* gw = grad_weight ? grad_weight->raw() : nullptr;

  for (int co = 0; co < g.cout; ++co) {
    const float* gc = go + co * out_chan;
    for (int ci = 0; ci < g.cin; ++ci) {
      const float* ic = in + ci * in_chan;
      float* gic = gi ? gi + ci * in_chan : nullptr;
      for (int kt = 0; kt < g.kt; ++kt) {
        int t_lo, t_hi;
        ValidRange(g.ot, g.t, st, pt, kt, &t_lo, &t_hi);
        for (int kh = 0; kh < g.kh; ++kh) {
          int h_lo, h_hi;
          ValidRange(g.oh, g.h, sh, ph, kh, &h_lo, &h_hi);
          for (int kw = 0; kw < g.kw; ++kw) {
            int w_lo, w_hi;
            ValidRange(g.ow, g.w, sw, pw, kw, &w_lo, &w_hi);
            const std::size_t widx =
                (((static_cast<std::size_t>(co) * g.cin + ci) * g.kt + kt) *
                     g.kh +
                 kh) *
                    g.kw +
                kw;
            const float k = wt[widx];
            double acc = 0.0;
            for (int ot = t_lo; ot < t_hi; ++ot) {
              const int it = ot * st - pt + kt;
              for (int oh = h_lo; oh < h_hi; ++oh) {
                const int ih = oh * sh - ph + kh;
                const float* grow = gc + ot * out_plane + oh * g.ow;
                const std::size_t ioff = it * in_plane + ih * g.w - pw + kw;
                if (gw != nullptr) {
                  const float* irow = ic + ioff;
                  float row = 0.0f;
                  for (int ow = w_lo; ow < w_hi; ++ow) {
                    row += grow[ow] * irow[ow * sw];
                  }
                  acc += row;
                }
                if (gic != nullptr) {
                  float* girow = gic + ioff;
                  for (int ow = w_lo; ow < w_hi; ++ow) {
                    girow[ow * sw] += k * grow[ow];
                  }
                }
              }
            }
            if (gw != nullptr) gw[widx] += static_cast<float>(acc);
          }
        }
      }
    }
  }
}

Tensor Upsample3dNearest(const Tensor& input, const Triple& factors) {
  if (input.ndim() != 4) {
    throw Error(ErrorCode::kShape, "upsample input must be CxTxHxW, got " +
                                       ShapeToString(input.shape()));
  }
  for (int f : factors) {
    if (f < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "upsample factors must be >= 1, got " + std::to_string(f));
    }
  }
  const int c = input.dim(0), t = input.dim(1), h = input.dim(2),
            w = input.dim(3);
  const int ot = t * factors[0], oh = h * factors[1], ow = w * factors[2];
  Tensor out({c, ot, oh, ow});
  float* o = out.raw();
  const float* in = input.raw();
  for (int ci = 0; ci < c; ++ci) {
    for (int z = 0; z < ot; ++z) {
      const int sz = z / factors[0];
      for (int y = 0; y < oh; ++y) {
        const float* irow =
            in + ((static_cast<std::size_t>(ci) * t + sz) * h + y / factors[1]) * w;
        for (int x = 0; x < ow; ++x) *o++ = irow[x / factors[2]];
      }
    }
  }
  return out;
}

Tensor Upsample3dNearestBackward(const Tensor& grad_output,
                                 const Triple& factors) {
  for (int f : factors) {
    if (f < 1) {
      throw Error(ErrorCode::kInvalidArgument, "upsample factors must be >= 1");
    }
  }
  const int c = grad_output.dim(0), ot = grad_output.dim(1),
            oh = grad_output.dim(2), ow = grad_output.dim(3);
  if (ot % factors[0] || oh % factors[1] || ow % factors[2]) {
    throw Error(ErrorCode::kShape,
                "upsample gradient extent not divisible by factors");
  }
  const int t = ot / factors[0], h = oh / factors[1], w = ow / factors[2];
  Tensor grad({c, t, h, w});
  float* g = grad.raw();
  const float* go = grad_output.raw();
  for (int ci = 0; ci < c; ++ci) {
    for (int z = 0; z < ot; ++z) {
      for (int y = 0; y < oh; ++y) {
        float* grow =
            g + ((static_cast<std::size_t>(ci) * t + z / factors[0]) * h +
                 y / factors[1]) *
                    w;
        for (int x = 0; x < ow; ++x) grow[x / factors[2]] += *go++;
      }
    }
  }
  return grad;
}

Tensor Relu(const Tensor& input) {
  Tensor out = input;
  for (float& v : out.data()) v = v > 0.0f ? v : 0.0f;
  return out;
}

Tensor Sigmoid(const Tensor& input) {
  Tensor out = input;
  for (float& v : out.data()) {
    // Split by sign so exp never overflows.
    if (v >= 0.0f) {
      v = 1.0f / (1.0f + std::exp(-v));
    } else {
      const float e = std::exp(v);
      v = e / (1.0f + e);
    }
    // Keep the open interval (0, 1) even where float32 saturates.
    v = std::clamp(v, std::numeric_limits<float>::min(),
                   std::nextafter(1.0f, 0.0f));
  }
  return out;
}

double MseLossExact(const Tensor& prediction, const Tensor& target) {
  if (prediction.shape() != target.shape()) {
    throw Error(ErrorCode::kShape,
                "mse shape mismatch: " + ShapeToString(prediction.shape()) +
                    " vs " + ShapeToString(target.shape()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double d = static_cast<double>(prediction[i]) - target[i];
    total += d * d;
  }
  return total / static_cast<double>(prediction.size());
}

float MseLoss(const Tensor& prediction, const Tensor& target) {
  return static_cast<float>(MseLossExact(prediction, target));
}

}  // namespace pld
