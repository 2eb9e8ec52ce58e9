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

#ifndef PLD_SCORE_H_
#define PLD_SCORE_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pld/model.h"
#include "pld/tensor.h"
#include "pld/video.h"

namespace pld {

struct SegmentScore {
  std::string video_id;
  int segment_index = 0;
  double score = 0.0;

  bool operator==(const SegmentScore&) const = default;
};

// Produces the H x W distinction map for frame t of a video.
using MapPredictor = std::function<Tensor(const VideoRecord& video, int t)>;

// Runs `net` on clips built the way it was trained.
MapPredictor NetPredictor(const PldNet& net, TemporalMode mode);

// Mean of every pixel of every evaluated frame of the segment, where the
// evaluated frames are start, start + stride, ... (stride 1 = all frames).
SegmentScore ScoreSegment(const MapPredictor& predict, const VideoRecord& video,
                          int segment_index, int stride);
std::vector<SegmentScore> ScoreVideo(const MapPredictor& predict,
                                     const VideoRecord& video, int stride);
std::vector<SegmentScore> ScoreDataset(const MapPredictor& predict,
                                       const Dataset& dataset, int stride);

// Descending score; ties by ascending segment index, then video id.
std::vector<SegmentScore> RankSegments(std::vector<SegmentScore> scores);

// Segment indices of the top_k ranked segments of one video's scores.
std::vector<int> SelectHighlights(const std::vector<SegmentScore>& scores,
                                  int top_k);

// scores.json: [{"video_id": ..., "segment_index": ..., "score": ...}, ...]
std::string ScoresToJson(const std::vector<SegmentScore>& scores);
std::vector<SegmentScore> ScoresFromJson(std::string_view text);
void WriteScores(const std::filesystem::path& path,
                 const std::vector<SegmentScore>& scores);
std::vector<SegmentScore> ReadScores(const std::filesystem::path& path);

// Binary PGM (P5) rendering; pixel = floor(255 * p + 0.5) clamped to [0, 255].
std::string EncodePgm(const Tensor& map);

// Writes map_NNNNN.pldt and map_NNNNN.pgm for every stride-th frame of the
// video into out_dir; returns the PLDT paths.
std::vector<std::filesystem::path> ExportDistinctionMaps(
    const MapPredictor& predict, const VideoRecord& video, int stride,
    const std::filesystem::path& out_dir);

}  // namespace pld

#endif  // PLD_SCORE_H_
