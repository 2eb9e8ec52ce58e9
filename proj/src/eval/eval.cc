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

#include "pld/eval.h"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"
#include "pld/error.h"
#include "pld/rng.h"

namespace pld {
using nlohmann::json;

double AveragePrecision(std::span<const int> ranked) {
  double sum = 0.0;
  int positives = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (ranked[k] == 1) {
      ++positives;
      sum += static_cast<double>(positives) / static_cast<double>(k + 1);
    }
  }
  return positives == 0 ? 0.0 : sum / positives;
}

double ApAtK(std::span<const int> ranked, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const int total_positives =
      static_cast<int>(std::count(ranked.begin(), ranked.end(), 1));
  const int normalizer = std::min(total_positives, k);
  if (normalizer == 0) return 0.0;
  const std::size_t depth = std::min<std::size_t>(k, ranked.size());
  double sum = 0.0;
  int hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (ranked[i] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / normalizer;
}

const char* MetricName(Metric metric) {
  return metric == Metric::kMap ? "map" : "ap5";
}

Metric ParseMetric(std::string_view name) {
  if (name == "map") return Metric::kMap;
  if (name == "ap5") return Metric::kAp5;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + std::string(name) + "'");
}

std::string MetricDefinition(Metric metric) {
  if (metric == Metric::kMap) {
    return "mAP: per video, segments ranked by descending score (ties: lower "
           "segment index first); AP = (1/P) * sum of precision@k over the "
           "ranks k of the P highlight segments; overall = unweighted mean of "
           "per-video AP";
  }
  return "AP@5 (interpretation of 'top-5 mAP'): per video, AP truncated to "
         "the 5 top-ranked segments and normalized by min(P, 5); overall = "
         "unweighted mean of per-video values";
}

namespace {

double VideoMetric(std::span<const int> ranked, Metric metric) {
  return metric == Metric::kMap ? AveragePrecision(ranked) : ApAtK(ranked, 5);
}

std::vector<int> RankedLabels(const std::vector<SegmentScore>& scores,
                              const VideoRecord& video) {
  std::vector<int> ranked;
  for (const SegmentScore& s : RankSegments(scores)) {
    ranked.push_back(video.labels[s.segment_index]);
  }
  return ranked;
}

}  // namespace

EvalReport EvaluateScores(const std::vector<SegmentScore>& scores,
                          const Dataset& dataset, Metric metric) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<SegmentScore>> by_video;
  for (const SegmentScore& s : scores) {
    auto [it, inserted] = by_video.try_emplace(s.video_id);
    if (inserted) order.push_back(s.video_id);
    it->second.push_back(s);
  }

  EvalReport report;
  report.metric = metric;
  std::map<std::string, std::pair<double, int>> domain_sums;
  for (const std::string& id : order) {
    const VideoRecord* video = nullptr;
    for (const VideoRecord& v : dataset.videos) {
      if (v.id == id) video = &v;
    }
    if (video == nullptr) {
      throw Error(ErrorCode::kData,
                  "scored video '" + id + "' has no ground truth in the dataset");
    }
    const std::vector<SegmentScore>& vs = by_video[id];
    std::vector<int> seen(video->segments.size(), 0);
    for (const SegmentScore& s : vs) {
      if (s.segment_index < 0 ||
          s.segment_index >= static_cast<int>(seen.size())) {
        throw Error(ErrorCode::kData, "video '" + id + "': scored segment " +
                                          std::to_string(s.segment_index) +
                                          " has no ground-truth label");
      }
      if (seen[s.segment_index]++) {
        throw Error(ErrorCode::kData, "video '" + id + "': segment " +
                                          std::to_string(s.segment_index) +
                                          " scored twice");
      }
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
      if (!seen[k]) {
        throw Error(ErrorCode::kData, "video '" + id + "': segment " +
                                          std::to_string(k) + " has no score");
      }
    }
    const std::vector<int> ranked = RankedLabels(vs, *video);
    VideoAp entry{id, video->domain, VideoMetric(ranked, metric),
                  static_cast<int>(std::count(ranked.begin(), ranked.end(), 1))};
    if (entry.positives == 0) {
      report.warnings.push_back("video '" + id +
                                "' has no highlight segments; AP counted as 0");
    }
    auto& [sum, n] = domain_sums[entry.domain];
    sum += entry.ap;
    ++n;
    report.per_video.push_back(std::move(entry));
  }
  double total = 0.0;
  for (const VideoAp& v : report.per_video) total += v.ap;
  report.overall =
      report.per_video.empty() ? 0.0 : total / report.per_video.size();
  for (const auto& [domain, sn] : domain_sums) {
    report.per_domain[domain] = sn.first / sn.second;
  }
  return report;
}

double RandomBaseline(const Dataset& dataset, Metric metric, int trials,
                      std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (dataset.videos.empty()) return 0.0;
  double total = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(DeriveSeed(seed, "eval/random", trial));
    double trial_sum = 0.0;
    for (const VideoRecord& video : dataset.videos) {
      std::vector<SegmentScore> scores;
      for (int s = 0; s < static_cast<int>(video.segments.size()); ++s) {
        scores.push_back({video.id, s, rng.Uniform()});
      }
      trial_sum += VideoMetric(RankedLabels(scores, video), metric);
    }
    total += trial_sum / dataset.videos.size();
  }
  return total / trials;
}

std::string EvalReportToJson(const EvalReport& report) {
  json per_video = json::array();
  for (const VideoAp& v : report.per_video) {
    per_video.push_back({{"video_id", v.video_id},
                         {"domain", v.domain},
                         {"ap", v.ap},
                         {"positives", v.positives}});
  }
  json j = {{"metric", MetricName(report.metric)},
            {"definition", MetricDefinition(report.metric)},
            {"zero_positive_policy",
             "videos without highlight segments score 0 and are included in "
             "the mean"},
            {"per_video", per_video},
            {"per_domain", report.per_domain},
            {"overall", report.overall},
            {"warnings", report.warnings}};
  if (report.random_baseline) j["random_baseline"] = *report.random_baseline;
  return j.dump(2) + "\n";
}

}  // namespace pld
