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

#include "pld/error.h"
#include "pld/video.h"

namespace pld {
namespace {

[[noreturn]] void Fail(const VideoRecord& video, const std::string& what) {
  throw Error(ErrorCode::kData, "video '" + video.id + "': " + what);
}

}  // namespace

int VideoRecord::channels() const {
  return frames.at(0).ndim() == 3 ? frames[0].dim(0) : 1;
}
int VideoRecord::height() const { return frames.at(0).dim(-2); }
int VideoRecord::width() const { return frames.at(0).dim(-1); }

int VideoRecord::SegmentOf(int t) const {
  auto it = std::upper_bound(
      segments.begin(), segments.end(), t,
      [](int frame, const Segment& s) { return frame < s.end; });
  if (t < 0 || it == segments.end() || t < it->start) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame " + std::to_string(t) + " outside video '" + id + "'");
  }
  return static_cast<int>(it - segments.begin());
}

void ValidateVideo(const VideoRecord& video) {
  if (video.id.empty()) {
    throw Error(ErrorCode::kData, "video with empty id");
  }
  if (video.frames.empty()) Fail(video, "no frames");
  const Tensor& first = video.frames[0];
  const bool color = first.ndim() == 3 && first.dim(0) == 3;
  if (first.ndim() != 2 && !color) {
    Fail(video, "frames must be HxW or 3xHxW, got " +
                    ShapeToString(first.shape()));
  }
  for (std::size_t i = 1; i < video.frames.size(); ++i) {
    if (video.frames[i].shape() != first.shape()) {
      Fail(video, "frame " + std::to_string(i) + " has shape " +
                      ShapeToString(video.frames[i].shape()) + ", expected " +
                      ShapeToString(first.shape()));
    }
  }
  if (video.segments.empty()) Fail(video, "no segments");
  int expected_start = 0;
  for (const Segment& s : video.segments) {
    if (s.start != expected_start || s.end <= s.start) {
      Fail(video, "segments not covering: [" + std::to_string(s.start) + "," +
                      std::to_string(s.end) + ") does not continue at " +
                      std::to_string(expected_start));
    }
    expected_start = s.end;
  }
  if (expected_start != video.frame_count()) {
    Fail(video, "segments not covering: they end at " +
                    std::to_string(expected_start) + " but the video has " +
                    std::to_string(video.frame_count()) + " frames");
  }
  if (video.labels.size() != video.segments.size()) {
    Fail(video, "labels length " + std::to_string(video.labels.size()) +
                    " != segments length " +
                    std::to_string(video.segments.size()));
  }
  for (int label : video.labels) {
    if (label != 0 && label != 1) Fail(video, "labels must be 0 or 1");
  }
  if (video.has_saliency()) {
    if (video.saliency.size() != video.frames.size()) {
      Fail(video, "saliency has " + std::to_string(video.saliency.size()) +
                      " masks for " + std::to_string(video.frame_count()) +
                      " frames");
    }
    const std::vector<int> hw{video.height(), video.width()};
    for (std::size_t i = 0; i < video.saliency.size(); ++i) {
      if (video.saliency[i].shape() != hw) {
        Fail(video, "saliency mask " + std::to_string(i) + " has shape " +
                        ShapeToString(video.saliency[i].shape()) +
                        ", expected " + ShapeToString(hw));
      }
      if (!video.saliency[i].AllFinite() || video.saliency[i].Min() < 0.0f) {
        Fail(video, "saliency mask " + std::to_string(i) +
                        " has negative or non-finite values");
      }
    }
  }
}

const VideoRecord& Dataset::Find(std::string_view id) const {
  for (const VideoRecord& v : videos) {
    if (v.id == id) return v;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no video '" + std::string(id) + "' in dataset");
}

namespace {

bool SameTensors(const std::vector<Tensor>& a, const std::vector<Tensor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].BitwiseEquals(b[i])) return false;
  }
  return true;
}

}  // namespace

bool Dataset::operator==(const Dataset& other) const {
  if (videos.size() != other.videos.size()) return false;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    const VideoRecord& a = videos[i];
    const VideoRecord& b = other.videos[i];
    if (a.id != b.id || a.domain != b.domain || a.segments != b.segments ||
        a.labels != b.labels || !SameTensors(a.frames, b.frames) ||
        !SameTensors(a.saliency, b.saliency)) {
      return false;
    }
  }
  return true;
}

const char* TemporalModeName(TemporalMode mode) {
  return mode == TemporalMode::kSliding ? "sliding" : "duplicate";
}

TemporalMode ParseTemporalMode(std::string_view name) {
  if (name == "sliding") return TemporalMode::kSliding;
  if (name == "duplicate") return TemporalMode::kDuplicate;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown temporal mode '" + std::string(name) + "'");
}

namespace {

void CheckClipArgs(const VideoRecord& video, int t, int clip_length) {
  if (t < 0 || t >= video.frame_count()) {
    throw Error(ErrorCode::kInvalidArgument,
                "target frame " + std::to_string(t) + " out of range for '" +
                    video.id + "' with " + std::to_string(video.frame_count()) +
                    " frames");
  }
  if (clip_length < 1 || clip_length > video.frame_count()) {
    throw Error(ErrorCode::kInvalidArgument,
                "clip length " + std::to_string(clip_length) +
                    " must be in [1, " + std::to_string(video.frame_count()) +
                    "]");
  }
}

Clip AssembleClip(const VideoRecord& video, int t, std::vector<int> indices) {
  Clip clip;
  clip.target_index = t;
  clip.frames.reserve(indices.size());
  for (int m : indices) clip.frames.push_back(video.frames[m]);
  clip.source_indices = std::move(indices);
  return clip;
}

}  // namespace

Clip BuildClip(const VideoRecord& video, int t, int clip_length) {
  CheckClipArgs(video, t, clip_length);
  std::vector<int> indices(clip_length);
  for (int k = 0; k < clip_length; ++k) {
    const int m = t - clip_length + 1 + k;
    indices[k] = m < 0 ? -m : m;
  }
  return AssembleClip(video, t, std::move(indices));
}

Clip BuildClipNoTemporal(const VideoRecord& video, int t, int clip_length) {
  CheckClipArgs(video, t, clip_length);
  return AssembleClip(video, t, std::vector<int>(clip_length, t));
}

Clip MakeClip(const VideoRecord& video, int t, int clip_length,
              TemporalMode mode) {
  return mode == TemporalMode::kSliding
             ? BuildClip(video, t, clip_length)
             : BuildClipNoTemporal(video, t, clip_length);
}

Tensor Clip::ToTensor() const {
  const Tensor& f0 = frames.at(0);
  const int c = f0.ndim() == 3 ? f0.dim(0) : 1;
  const int h = f0.dim(-2), w = f0.dim(-1);
  const int l = length();
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  Tensor out({c, l, h, w});
  for (int k = 0; k < l; ++k) {
    const float* src = frames[k].raw();
    for (int ci = 0; ci < c; ++ci) {
      std::copy(src + ci * plane, src + (ci + 1) * plane,
                out.raw() + (static_cast<std::size_t>(ci) * l + k) * plane);
    }
  }
  return out;
}

}  // namespace pld
