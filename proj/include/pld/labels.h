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

#ifndef PLD_LABELS_H_
#define PLD_LABELS_H_

#include <string_view>
#include <vector>

#include "pld/tensor.h"
#include "pld/video.h"

namespace pld {

// Threshold applied to raw saliency values.
inline constexpr float kDefaultBeta = 0.0005f;

// Per-pixel non-negative saliency for one frame, HxW.
struct SaliencyMask {
  Tensor values;
};

// Per-pixel distinction for one frame, HxW, values in [0, 1]. Pseudo-labels
// are exactly binary; model predictions lie strictly inside (0, 1).
struct DistinctionMap {
  Tensor values;
};

enum class LabelMode {
  kBasic,     // segment label broadcast to every pixel
  kSaliency,  // highlight pixels kept only where saliency exceeds beta
};

const char* LabelModeName(LabelMode mode);
LabelMode ParseLabelMode(std::string_view name);

// All ones when frame t lies in a highlight segment, all zeros otherwise.
DistinctionMap BasicLabel(const VideoRecord& video, int t);

// Zeros for non-highlight frames. For highlight frames pixel (i, j) is 1 iff
// mask(i, j) > beta; a value equal to beta maps to 0.
DistinctionMap SaliencyLabel(const VideoRecord& video, int t,
                             const SaliencyMask& mask, float beta);

// Label for frame t in the given mode; saliency mode reads the video's own
// masks.
DistinctionMap MakeLabel(const VideoRecord& video, int t, LabelMode mode,
                         float beta);

// One mask per frame from the video's saliency sequence (loaded from the
// manifest or produced by the synthetic generator).
std::vector<SaliencyMask> SaliencyMasks(const VideoRecord& video);

}  // namespace pld

#endif  // PLD_LABELS_H_
