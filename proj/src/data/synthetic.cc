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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pld/error.h"
#include "pld/rng.h"
#include "pld/video.h"

namespace pld {
namespace {

void ValidateSynthConfig(const SynthConfig& c) {
  if (c.videos < 1 || c.segments_per_video < 1 || c.frames_per_segment < 1 ||
      c.height < 1 || c.width < 1) {
    throw Error(ErrorCode::kConfig, "synthetic counts must all be >= 1");
  }
  if (!(c.highlight_fraction > 0.0 && c.highlight_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "highlight_fraction must be in (0, 1)");
  }
  if (c.square_size < 1 || c.square_size > std::min(c.height, c.width)) {
    throw Error(ErrorCode::kConfig, "square_size must fit inside the frame");
  }
  if (!(c.noise_sigma >= 0.0f) || !(c.background_mean >= 0.0f)) {
    throw Error(ErrorCode::kConfig, "noise and background must be >= 0");
  }
}

int HighlightCount(const SynthConfig& c) {
  const int n = c.segments_per_video;
  if (n == 1) return c.highlight_fraction >= 0.5 ? 1 : 0;
  const int k = static_cast<int>(std::lround(c.highlight_fraction * n));
  return std::clamp(k, 1, n - 1);
}

// Bouncing 1-D position in [0, range].
struct Axis {
  int pos;
  int vel;

  void Advance(int range) {
    pos += vel;
    if (pos < 0) {
      pos = -pos;
      vel = -vel;
    } else if (pos > range) {
      pos = 2 * range - pos;
      vel = -vel;
    }
    pos = std::clamp(pos, 0, range);
  }
};

int RandomVelocity(Rng& rng) {
  constexpr int kSpeeds[] = {-2, -1, 1, 2};
  return kSpeeds[rng.UniformInt(4)];
}

Tensor Background(const SynthConfig& c, Rng& rng) {
  Tensor frame({c.height, c.width});
  for (float& v : frame.data()) {
    const double n = std::clamp(rng.Normal(), -3.0, 3.0) * c.noise_sigma;
    v = static_cast<float>(std::clamp(c.background_mean + n, 0.0, 1.0));
  }
  return frame;
}

void Stamp(const SynthConfig& c, int y, int x, Tensor& frame, Tensor& mask) {
  for (int i = y; i < y + c.square_size; ++i) {
    for (int j = x; j < x + c.square_size; ++j) {
      frame[static_cast<std::size_t>(i) * c.width + j] = 1.0f;
      mask[static_cast<std::size_t>(i) * c.width + j] = 1.0f;
    }
  }
}

VideoRecord GenerateVideo(const SynthConfig& c, int index) {
  Rng rng(DeriveSeed(c.seed, "synth/video", index));
  VideoRecord video;
  char id[64];
  std::snprintf(id, sizeof(id), "%s_%03d", c.id_prefix.c_str(), index);
  video.id = id;
  video.domain = "synthetic";

  const int n = c.segments_per_video;
  video.labels.assign(n, 0);
  std::fill_n(video.labels.begin(), HighlightCount(c), 1);
  rng.Shuffle(video.labels);

  const int range_y = c.height - c.square_size;
  const int range_x = c.width - c.square_size;
  for (int s = 0; s < n; ++s) {
    const int start = s * c.frames_per_segment;
    video.segments.push_back({start, start + c.frames_per_segment});
    const bool highlight = video.labels[s] == 1;
    const bool has_square =
        highlight || c.scenario == SynthScenario::kDistractor;
    const bool moving = highlight;
    Axis ay{static_cast<int>(rng.UniformInt(range_y + 1)), RandomVelocity(rng)};
    Axis ax{static_cast<int>(rng.UniformInt(range_x + 1)), RandomVelocity(rng)};
    for (int f = 0; f < c.frames_per_segment; ++f) {
      Tensor frame = Background(c, rng);
      Tensor mask({c.height, c.width});
      if (has_square) {
        Stamp(c, ay.pos, ax.pos, frame, mask);
        if (moving) {
          ay.Advance(range_y);
          ax.Advance(range_x);
        }
      }
      video.frames.push_back(std::move(frame));
      video.saliency.push_back(std::move(mask));
    }
  }
  return video;
}

}  // namespace

const char* SynthScenarioName(SynthScenario scenario) {
  return scenario == SynthScenario::kBasic ? "basic" : "distractor";
}

SynthScenario ParseSynthScenario(std::string_view name) {
  if (name == "basic") return SynthScenario::kBasic;
  if (name == "distractor") return SynthScenario::kDistractor;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown synthetic scenario '" + std::string(name) + "'");
}

Dataset GenerateSynthetic(const SynthConfig& config) {
  ValidateSynthConfig(config);
  Dataset dataset;
  dataset.videos.reserve(config.videos);
  for (int i = 0; i < config.videos; ++i) {
    dataset.videos.push_back(GenerateVideo(config, i));
  }
  return dataset;
}

}  // namespace pld
