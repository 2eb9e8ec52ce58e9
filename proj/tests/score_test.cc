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

#include <gtest/gtest.h>

#include "pld/error.h"
#include "pld/rng.h"
#include "pld/score.h"
#include "test_util.h"

namespace pld {
namespace {

using testing::RandomTensor;
using testing::TempDir;

VideoRecord BlankVideo(const std::string& id, int h, int w,
                       std::vector<Segment> segments) {
  VideoRecord v;
  v.id = id;
  const int n = segments.back().end;
  for (int k = 0; k < n; ++k) v.frames.emplace_back(std::vector<int>{h, w});
  v.labels.assign(segments.size(), 0);
  v.segments = std::move(segments);
  return v;
}

TEST(ScoreTest, ConstantPredictor) {
  const VideoRecord v = BlankVideo("c", 3, 4, {{0, 5}, {5, 7}});
  const MapPredictor constant = [](const VideoRecord& video, int) {
    return Tensor({video.height(), video.width()}, 0.7f);
  };
  for (const SegmentScore& s : ScoreVideo(constant, v, 1)) {
    EXPECT_NEAR(s.score, 0.7, 1e-7);
    EXPECT_EQ(s.video_id, "c");
  }
}

TEST(ScoreTest, HalfOnHalfOffIsOneHalf) {
  const VideoRecord v = BlankVideo("h", 2, 2, {{0, 4}});
  const MapPredictor split = [](const VideoRecord&, int) {
    return Tensor({2, 2}, std::vector<float>{1.0f, 0.0f, 1.0f, 0.0f});
  };
  EXPECT_EQ(ScoreSegment(split, v, 0, 1).score, 0.5);
  const MapPredictor alternating = [](const VideoRecord&, int t) {
    return Tensor({2, 2}, t % 2 ? 1.0f : 0.0f);
  };
  EXPECT_EQ(ScoreSegment(alternating, v, 0, 1).score, 0.5);
  EXPECT_EQ(ScoreSegment(alternating, v, 0, 2).score, 0.0);
}

TEST(ScoreTest, MatchesFlatMeanOracle) {
  Rng rng(3);
  const VideoRecord v = BlankVideo("r", 5, 6, {{0, 3}, {3, 10}, {10, 11}});
  std::vector<Tensor> maps;
  for (int t = 0; t < 11; ++t) maps.push_back(RandomTensor({5, 6}, rng, 0.0, 1.0));
  const MapPredictor table = [&](const VideoRecord&, int t) { return maps[t]; };
  for (int stride : {1, 2, 3}) {
    const std::vector<SegmentScore> scores = ScoreVideo(table, v, stride);
    for (int s = 0; s < 3; ++s) {
      std::vector<double> flat;
      for (int t = v.segments[s].start; t < v.segments[s].end; t += stride) {
        for (float x : maps[t].data()) flat.push_back(x);
      }
      double mean = 0.0;
      for (double x : flat) mean += x;
      mean /= flat.size();
      EXPECT_NEAR(scores[s].score, mean, 1e-6);
    }
  }
}

TEST(ScoreTest, ErrorCases) {
  const VideoRecord v = BlankVideo("e", 2, 2, {{0, 2}});
  const MapPredictor ok = [](const VideoRecord&, int) { return Tensor({2, 2}); };
  const MapPredictor wrong = [](const VideoRecord&, int) { return Tensor({2, 3}); };
  EXPECT_THROW(ScoreSegment(ok, v, 1, 1), Error);
  EXPECT_THROW(ScoreSegment(ok, v, -1, 1), Error);
  EXPECT_THROW(ScoreSegment(ok, v, 0, 0), Error);
  EXPECT_THROW(ScoreSegment(wrong, v, 0, 1), Error);
}

TEST(RankTest, Examples) {
  const std::vector<SegmentScore> scores{{"a", 0, 0.2}, {"a", 1, 0.9}, {"a", 2, 0.5}};
  const std::vector<SegmentScore> ranked = RankSegments(scores);
  EXPECT_EQ(ranked[0].segment_index, 1);
  EXPECT_EQ(ranked[1].segment_index, 2);
  EXPECT_EQ(ranked[2].segment_index, 0);
  EXPECT_EQ(SelectHighlights(scores, 2), (std::vector<int>{1, 2}));
  EXPECT_EQ(SelectHighlights(scores, 0), std::vector<int>{});
  EXPECT_EQ(SelectHighlights(scores, 10).size(), 3u);
  EXPECT_THROW(SelectHighlights(scores, -1), Error);
  const std::vector<SegmentScore> ties{{"a", 2, 0.5}, {"a", 0, 0.5}, {"a", 1, 0.5}};
  EXPECT_EQ(SelectHighlights(ties, 3), (std::vector<int>{0, 1, 2}));
}

TEST(RankTest, SortOracleAndPermutationInvariance) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SegmentScore> scores;
    for (int i = 0; i < 100; ++i) {
      // Coarse values so that ties occur.
      scores.push_back({"v", i, std::floor(rng.Uniform() * 20) / 20});
    }
    const std::vector<SegmentScore> ranked = RankSegments(scores);
    std::vector<std::pair<double, int>> oracle;
    for (const SegmentScore& s : scores) oracle.push_back({-s.score, s.segment_index});
    std::sort(oracle.begin(), oracle.end());
    for (int i = 0; i < 100; ++i) {
      EXPECT_EQ(ranked[i].segment_index, oracle[i].second);
    }
    std::vector<SegmentScore> shuffled = scores;
    rng.Shuffle(shuffled);
    EXPECT_EQ(RankSegments(shuffled), ranked);
  }
}

TEST(PgmTest, Rendering) {
  const std::string header = "P5\n2 1\n255\n";
  const std::string half = EncodePgm(Tensor({1, 2}, 0.5f));
  ASSERT_EQ(half.size(), header.size() + 2);
  EXPECT_EQ(half.substr(0, header.size()), header);
  EXPECT_EQ(static_cast<unsigned char>(half[header.size()]), 128);
  const std::string ends = EncodePgm(Tensor({1, 2}, std::vector<float>{0.0f, 1.0f}));
  EXPECT_EQ(static_cast<unsigned char>(ends[header.size()]), 0);
  EXPECT_EQ(static_cast<unsigned char>(ends[header.size() + 1]), 255);
  const std::string clamped = EncodePgm(Tensor({1, 2}, std::vector<float>{-3.0f, 7.0f}));
  EXPECT_EQ(static_cast<unsigned char>(clamped[header.size()]), 0);
  EXPECT_EQ(static_cast<unsigned char>(clamped[header.size() + 1]), 255);
}

TEST(ExportTest, WritesMapsThatReadBack) {
  TempDir dir;
  Rng rng(1);
  const VideoRecord v = BlankVideo("x", 3, 3, {{0, 5}});
  std::vector<Tensor> maps;
  for (int t = 0; t < 5; ++t) maps.push_back(RandomTensor({3, 3}, rng, 0.0, 1.0));
  const MapPredictor table = [&](const VideoRecord&, int t) { return maps[t]; };
  const auto paths = ExportDistinctionMaps(table, v, 2, dir.path());
  ASSERT_EQ(paths.size(), 3u);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    EXPECT_TRUE(ReadPldt(paths[i]).BitwiseEquals(maps[2 * i]));
    auto pgm = paths[i];
    pgm.replace_extension(".pgm");
    EXPECT_EQ(ReadFileBytes(pgm), EncodePgm(maps[2 * i]));
  }
}

TEST(ScoresJsonTest, RoundTrip) {
  TempDir dir;
  const std::vector<SegmentScore> scores{{"a", 0, 0.125}, {"a", 1, 1.0 / 3}, {"b", 0, 0.0}};
  WriteScores(dir.path() / "scores.json", scores);
  EXPECT_EQ(ReadScores(dir.path() / "scores.json"), scores);
  EXPECT_EQ(ScoresFromJson(ScoresToJson(scores)), scores);
  EXPECT_THROW(ScoresFromJson("{}"), Error);
  EXPECT_THROW(ScoresFromJson("[{\"video_id\": 3}]"), Error);
}

}  // namespace
}  // namespace pld
