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

#include "pld/score.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "pld/error.h"

namespace pld {
namespace fs = std::filesystem;
using nlohmann::json;

MapPredictor NetPredictor(const PldNet& net, TemporalMode mode) {
  return [&net, mode](const VideoRecord& video, int t) {
    return net.Infer(MakeClip(video, t, net.config().clip_length, mode)).values;
  };
}

SegmentScore ScoreSegment(const MapPredictor& predict, const VideoRecord& video,
                          int segment_index, int stride) {
  if (stride < 1) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  if (segment_index < 0 ||
      segment_index >= static_cast<int>(video.segments.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "segment " + std::to_string(segment_index) +
                    " out of range for video '" + video.id + "'");
  }
  const Segment& s = video.segments[segment_index];
  if (s.length() <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "segment " + std::to_string(segment_index) + " of video '" +
                    video.id + "' is empty");
  }
  const std::vector<int> hw{video.height(), video.width()};
  double total = 0.0;
  std::size_t count = 0;
  for (int t = s.start; t < s.end; t += stride) {
    const Tensor map = predict(video, t);
    if (map.shape() != hw) {
      throw Error(ErrorCode::kShape, "predicted map " +
                                         ShapeToString(map.shape()) +
                                         " does not match frame " +
                                         ShapeToString(hw));
    }
    total += map.Sum();
    count += map.size();
  }
  return {video.id, segment_index, total / static_cast<double>(count)};
}

std::vector<SegmentScore> ScoreVideo(const MapPredictor& predict,
                                     const VideoRecord& video, int stride) {
  std::vector<SegmentScore> out;
  for (int s = 0; s < static_cast<int>(video.segments.size()); ++s) {
    out.push_back(ScoreSegment(predict, video, s, stride));
  }
  return out;
}

std::vector<SegmentScore> ScoreDataset(const MapPredictor& predict,
                                       const Dataset& dataset, int stride) {
  std::vector<SegmentScore> out;
  for (const VideoRecord& video : dataset.videos) {
    std::vector<SegmentScore> v = ScoreVideo(predict, video, stride);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<SegmentScore> RankSegments(std::vector<SegmentScore> scores) {
  std::stable_sort(scores.begin(), scores.end(),
                   [](const SegmentScore& a, const SegmentScore& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.segment_index != b.segment_index) {
                       return a.segment_index < b.segment_index;
                     }
                     return a.video_id < b.video_id;
                   });
  return scores;
}

std::vector<int> SelectHighlights(const std::vector<SegmentScore>& scores,
                                  int top_k) {
  if (top_k < 0) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 0");
  const std::vector<SegmentScore> ranked = RankSegments(scores);
  std::vector<int> out;
  for (int i = 0; i < std::min<int>(top_k, ranked.size()); ++i) {
    out.push_back(ranked[i].segment_index);
  }
  return out;
}

std::string ScoresToJson(const std::vector<SegmentScore>& scores) {
  json arr = json::array();
  for (const SegmentScore& s : scores) {
    arr.push_back({{"video_id", s.video_id},
                   {"segment_index", s.segment_index},
                   {"score", s.score}});
  }
  return arr.dump(2) + "\n";
}

std::vector<SegmentScore> ScoresFromJson(std::string_view text) {
  std::vector<SegmentScore> out;
  try {
    const json arr = json::parse(text);
    if (!arr.is_array()) {
      throw Error(ErrorCode::kFormat, "scores must be a JSON list");
    }
    for (const json& e : arr) {
      out.push_back({e.at("video_id").get<std::string>(),
                     e.at("segment_index").get<int>(),
                     e.at("score").get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("bad scores file: ") + e.what());
  }
  return out;
}

void WriteScores(const fs::path& path, const std::vector<SegmentScore>& scores) {
  WriteFileBytes(path, ScoresToJson(scores));
}

std::vector<SegmentScore> ReadScores(const fs::path& path) {
  return ScoresFromJson(ReadFileBytes(path));
}

std::string EncodePgm(const Tensor& map) {
  const int h = map.dim(-2), w = map.dim(-1);
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (float p : map.data()) {
    const double v = std::floor(255.0 * static_cast<double>(p) + 0.5);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(v, 0.0, 255.0))));
  }
  return out;
}

std::vector<fs::path> ExportDistinctionMaps(const MapPredictor& predict,
                                            const VideoRecord& video,
                                            int stride, const fs::path& out_dir) {
  if (stride < 1) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string());
  std::vector<fs::path> written;
  char name[32];
  for (int t = 0; t < video.frame_count(); t += stride) {
    const Tensor map = predict(video, t);
    std::snprintf(name, sizeof(name), "map_%05d", t);
    const fs::path base = out_dir / name;
    WritePldt(fs::path(base).concat(".pldt"), map);
    WriteFileBytes(fs::path(base).concat(".pgm"), EncodePgm(map));
    written.push_back(fs::path(base).concat(".pldt"));
  }
  return written;
}

}  // namespace pld
