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

#ifndef PLD_EVAL_H_
#define PLD_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pld/score.h"
#include "pld/video.h"

namespace pld {

// AP over a ranked relevance list (1 = highlight, best first):
//   AP = (1/P) * sum over positive ranks k of precision@k.
// A list without positives has AP 0.
double AveragePrecision(std::span<const int> ranked);

// AP restricted to the first min(k, n) ranks, normalized by min(P, k).
double ApAtK(std::span<const int> ranked, int k);

enum class Metric { kMap, kAp5 };

const char* MetricName(Metric metric);
Metric ParseMetric(std::string_view name);
std::string MetricDefinition(Metric metric);

struct VideoAp {
  std::string video_id;
  std::string domain;
  double ap = 0.0;
  int positives = 0;
};

struct EvalReport {
  Metric metric = Metric::kMap;
  std::vector<VideoAp> per_video;
  std::map<std::string, double> per_domain;
  double overall = 0.0;
  std::vector<std::string> warnings;
  std::optional<double> random_baseline;
};

// Ranks each scored video's segments and averages the per-video values.
// Every scored video must exist in `dataset` and have every segment scored
// exactly once.
EvalReport EvaluateScores(const std::vector<SegmentScore>& scores,
                          const Dataset& dataset, Metric metric);

// Mean metric of a scorer that draws i.i.d. uniform scores, averaged over
// `trials` seeded draws.
double RandomBaseline(const Dataset& dataset, Metric metric, int trials,
                      std::uint64_t seed);

std::string EvalReportToJson(const EvalReport& report);

}  // namespace pld

#endif  // PLD_EVAL_H_
