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

#ifndef PLD_MODEL_H_
#define PLD_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pld/autodiff.h"
#include "pld/gradcheck.h"
#include "pld/labels.h"
#include "pld/ops.h"
#include "pld/video.h"

namespace pld {

// conv3d -> relu; downsampling comes from the stride.
struct EncoderStage {
  int out_channels = 8;
  Triple kernel{3, 3, 3};
  Triple stride{2, 2, 2};
  Triple padding{1, 1, 1};
};

// upsample3d_nearest -> conv3d (stride 1) -> relu.
struct DecoderStage {
  Triple upsample{1, 2, 2};
  int out_channels = 8;
  Triple kernel{1, 3, 3};
  Triple padding{0, 1, 1};
};

// Encoder-decoder shape contract: input C x L x H x W, output 1 x 1 x H x W.
// The encoder must bring the temporal extent to 1 and the decoder must
// restore H x W. The head is conv3d to one channel (same padding) then
// sigmoid.
struct PldNetConfig {
  int in_channels = 1;
  int clip_length = 4;
  int height = 32;
  int width = 32;
  std::vector<EncoderStage> encoder;
  std::vector<DecoderStage> decoder;
  Triple head_kernel{1, 1, 1};
  // Initial output probability: the head bias starts at logit(output_prior),
  // every other bias at 0. Starting near the sparse-label base rate keeps the
  // first updates from driving the sigmoid into saturation.
  float output_prior = 0.05f;

  // Two encoder stages (C -> 8 -> 16, 3x3x3, stride 2), two decoder stages
  // (x2 spatial upsampling, 1x3x3 convs, 8 channels), 1x1x1 head. For clip
  // lengths where two stride-2 stages leave T > 1, the second encoder stage
  // spans the remaining frames instead.
  static PldNetConfig Desk(int clip_length, int height, int width,
                           int in_channels = 1);
  // Same topology with 2/4 channels on 8x8 frames; under 500 parameters.
  static PldNetConfig Toy();

  bool operator==(const PldNetConfig&) const;
};

bool operator==(const EncoderStage& a, const EncoderStage& b);
bool operator==(const DecoderStage& a, const DecoderStage& b);

// Throws Error(kConfig) naming the failing stage when the shape chain does
// not end at 1 x 1 x H x W.
void ValidateConfig(const PldNetConfig& config);

std::string ConfigToJson(const PldNetConfig& config);
PldNetConfig ConfigFromJson(std::string_view json_text);

class PldNet {
 public:
  // Glorot-uniform weights; biases zero except the head bias, which starts
  // at logit(output_prior). Deterministic per seed.
  static PldNet Init(const PldNetConfig& config, std::uint64_t seed);
  // Parameters taken as-is (checkpoint loading); shapes are checked.
  static PldNet FromParameters(const PldNetConfig& config,
                               std::vector<Parameter> params);

  const PldNetConfig& config() const { return config_; }
  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  std::vector<Parameter*> parameter_pointers();
  std::size_t parameter_count() const;

  // Records the forward pass on `tape`. `clip` is C x L x H x W; the result
  // is 1 x 1 x H x W.
  Var Forward(Tape& tape, Var clip);

  // Tape-free inference. Returns the H x W map for the clip's target frame.
  DistinctionMap Infer(const Tensor& clip) const;
  DistinctionMap Infer(const Clip& clip) const { return Infer(clip.ToTensor()); }

  void CheckInput(const Tensor& clip) const;

 private:
  PldNet(PldNetConfig config, std::vector<Parameter> params);

  PldNetConfig config_;
  std::vector<Parameter> params_;
};

// Training provenance stored next to the weights.
struct CheckpointMeta {
  std::uint64_t seed = 0;
  int epoch = 0;
  TemporalMode temporal_mode = TemporalMode::kSliding;
  LabelMode label_mode = LabelMode::kSaliency;
};

struct Checkpoint {
  PldNet net;
  CheckpointMeta meta;
};

// <dir>/checkpoint.json plus one <parameter name>.pldt per tensor.
void SaveCheckpoint(const PldNet& net, const CheckpointMeta& meta,
                    const std::filesystem::path& dir);
Checkpoint LoadCheckpoint(const std::filesystem::path& dir);

// Finite-difference check of d mse(net(clip), target) / d parameters.
GradCheckResult CheckNetGradients(PldNet& net, const Tensor& clip,
                                  const Tensor& target, float epsilon);

// Toy() net with seeded weights, a uniform random clip and a random binary
// target map.
GradCheckResult ToyModelGradCheck(std::uint64_t seed, float epsilon);

// Scalar model y = w * x (a 1x1x1 conv without bias contribution), loss y.
GradCheckResult LinearModelGradCheck(std::uint64_t seed, float epsilon);

}  // namespace pld

#endif  // PLD_MODEL_H_
