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

#ifndef PLD_VIDEO_H_
#define PLD_VIDEO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pld/tensor.h"

namespace pld {

// Half-open frame range [start, end).
struct Segment {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool operator==(const Segment&) const = default;
};

// One video: frames, a partition of the frames into segments, and a binary
// highlight label per segment (1 = highlight, 0 = non-highlight).
//
// Invariants (checked by ValidateVideo):
//   - segments are contiguous, non-overlapping and cover [0, frame_count)
//   - all frames share one shape, HxW or 3xHxW
//   - labels.size() == segments.size(), every label in {0, 1}
//   - saliency is empty or holds one non-negative HxW mask per frame
struct VideoRecord {
  std::string id;
  std::string domain = "default";
  std::vector<Tensor> frames;
  std::vector<Segment> segments;
  std::vector<int> labels;
  std::vector<Tensor> saliency;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int channels() const;
  int height() const;
  int width() const;
  bool has_saliency() const { return !saliency.empty(); }
  // Index of the segment holding frame t.
  int SegmentOf(int t) const;
  bool IsHighlight(int t) const { return labels[SegmentOf(t)] == 1; }
};

// Throws Error(kData) naming the video id on the first violated invariant.
void ValidateVideo(const VideoRecord& video);

struct Dataset {
  std::vector<VideoRecord> videos;

  const VideoRecord& Find(std::string_view id) const;
  bool operator==(const Dataset& other) const;
};

// How the L frames of a clip are chosen.
enum class TemporalMode {
  kSliding,    // the L frames ending at t, mirror-padded before frame 0
  kDuplicate,  // L copies of frame t (no temporal context)
};

const char* TemporalModeName(TemporalMode mode);
TemporalMode ParseTemporalMode(std::string_view name);

// L frames ordered oldest to target; source_indices records which video frame
// fills each slot.
struct Clip {
  int target_index = 0;
  std::vector<int> source_indices;
  std::vector<Tensor> frames;

  int length() const { return static_cast<int>(frames.size()); }
  // Stacks the frames into a C x L x H x W tensor.
  Tensor ToTensor() const;
};

// Slot k holds frame t - L + 1 + k; negative indices m reflect to -m (frame 0
// is not repeated), so t=0, L=3 gives [f2, f1, f0].
Clip BuildClip(const VideoRecord& video, int t, int clip_length);
// Every slot holds frame t.
Clip BuildClipNoTemporal(const VideoRecord& video, int t, int clip_length);
Clip MakeClip(const VideoRecord& video, int t, int clip_length,
              TemporalMode mode);

// Dataset manifest (dataset.json) with PLDT frame and mask files. Relative
// paths resolve against the manifest's directory.
Dataset LoadDataset(const std::filesystem::path& manifest_path);
// Writes <dir>/dataset.json plus <dir>/<video_id>/frame_NNNNN.pldt and
// sal_NNNNN.pldt. Returns the manifest path.
std::filesystem::path WriteDataset(const Dataset& dataset,
                                   const std::filesystem::path& dir);

enum class SynthScenario {
  // Highlight segments show a bright moving square; others are background.
  kBasic,
  // The square is present in every segment; it only moves in highlights.
  kDistractor,
};

const char* SynthScenarioName(SynthScenario scenario);
SynthScenario ParseSynthScenario(std::string_view name);

struct SynthConfig {
  int videos = 12;
  int segments_per_video = 8;
  int frames_per_segment = 100;
  int height = 32;
  int width = 32;
  double highlight_fraction = 0.5;
  std::uint64_t seed = 0;
  float background_mean = 0.1f;
  // Per-pixel Gaussian noise, truncated at +/-3 sigma.
  float noise_sigma = 0.02f;
  int square_size = 6;
  SynthScenario scenario = SynthScenario::kBasic;
  std::string id_prefix = "synth";
};

// Deterministic for a fixed config. Every video carries its oracle saliency:
// 1.0 on the square footprint, 0 elsewhere.
Dataset GenerateSynthetic(const SynthConfig& config);

}  // namespace pld

#endif  // PLD_VIDEO_H_
