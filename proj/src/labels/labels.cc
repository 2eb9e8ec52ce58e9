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

#include "pld/labels.h"

#include <string>

#include "pld/error.h"

namespace pld {

const char* LabelModeName(LabelMode mode) {
  return mode == LabelMode::kBasic ? "basic" : "saliency";
}

LabelMode ParseLabelMode(std::string_view name) {
  if (name == "basic") return LabelMode::kBasic;
  if (name == "saliency") return LabelMode::kSaliency;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown label mode '" + std::string(name) + "'");
}

DistinctionMap BasicLabel(const VideoRecord& video, int t) {
  const float value = video.IsHighlight(t) ? 1.0f : 0.0f;
  return {Tensor({video.height(), video.width()}, value)};
}

DistinctionMap SaliencyLabel(const VideoRecord& video, int t,
                             const SaliencyMask& mask, float beta) {
  const std::vector<int> hw{video.height(), video.width()};
  if (mask.values.shape() != hw) {
    throw Error(ErrorCode::kShape,
                "saliency mask " + ShapeToString(mask.values.shape()) +
                    " does not match frame " + ShapeToString(hw) +
                    " of video '" + video.id + "'");
  }
  if (!(beta >= 0.0f)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be >= 0");
  }
  DistinctionMap label{Tensor(hw)};
  if (!video.IsHighlight(t)) return label;
  for (std::size_t k = 0; k < label.values.size(); ++k) {
    label.values[k] = mask.values[k] > beta ? 1.0f : 0.0f;
  }
  return label;
}

DistinctionMap MakeLabel(const VideoRecord& video, int t, LabelMode mode,
                         float beta) {
  if (mode == LabelMode::kBasic) return BasicLabel(video, t);
  if (!video.has_saliency()) {
    throw Error(ErrorCode::kConfig,
                "saliency label mode needs saliency masks for video '" +
                    video.id + "'");
  }
  return SaliencyLabel(video, t, SaliencyMask{video.saliency.at(t)}, beta);
}

std::vector<SaliencyMask> SaliencyMasks(const VideoRecord& video) {
  if (video.saliency.size() != video.frames.size()) {
    throw Error(ErrorCode::kData,
                "video '" + video.id + "' has " +
                    std::to_string(video.saliency.size()) +
                    " saliency masks for " +
                    std::to_string(video.frame_count()) + " frames");
  }
  std::vector<SaliencyMask> masks;
  masks.reserve(video.saliency.size());
  for (const Tensor& m : video.saliency) {
    if (!m.AllFinite() || m.Min() < 0.0f) {
      throw Error(ErrorCode::kData,
                  "video '" + video.id + "' has a negative saliency value");
    }
    masks.push_back({m});
  }
  return masks;
}

}  // namespace pld
