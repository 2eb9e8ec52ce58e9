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

#ifndef PLD_TRAIN_H_
#define PLD_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pld/labels.h"
#include "pld/model.h"
#include "pld/video.h"

namespace pld {

struct TrainConfig {
  int epochs = 10;
  float lr = 0.05f;
  float momentum = 0.9f;
  int clip_length = 4;
  float beta = kDefaultBeta;
  int frames_per_segment_sampled = 8;
  LabelMode label_mode = LabelMode::kSaliency;
  TemporalMode temporal_mode = TemporalMode::kSliding;
  std::uint64_t seed = 0;
  // Model topology; Desk(clip_length, H, W, C) of the dataset when unset.
  std::optional<PldNetConfig> model;
  // Where to write the final checkpoint; nothing is written when empty.
  std::filesystem::path checkpoint_dir;
};

void ValidateTrainConfig(const TrainConfig& config);

struct TrainReport {
  // Mean per-step loss of each epoch, each step's loss measured before its
  // update.
  std::vector<double> epoch_losses;
  std::string checkpoint_path;
  double wall_clock_seconds = 0.0;
  std::size_t steps = 0;
};

struct TargetFrame {
  int video_index = 0;
  int frame = 0;

  bool operator==(const TargetFrame&) const = default;
};

// Up to `per_segment` frames drawn uniformly without replacement from every
// segment (all frames when the segment is shorter), in video, segment, frame
// order. Deterministic per seed.
std::vector<TargetFrame> SampleTargets(const Dataset& dataset, int per_segment,
                                       std::uint64_t seed);

// Training stream for one epoch: targets sampled with a per-epoch seed, then
// shuffled. Exposed so that tests can replay exactly what Train() saw.
std::vector<TargetFrame> EpochTargets(const Dataset& dataset,
                                      const TrainConfig& config, int epoch);

struct StepRecord {
  int epoch = 0;
  std::size_t step = 0;
  TargetFrame target;
  double loss = 0.0;
};

// Called after each step's loss is computed and before the update is applied,
// so `net` holds the weights that produced `loss`.
using StepObserver = std::function<void(const StepRecord&, const PldNet& net)>;

struct TrainResult {
  PldNet net;
  TrainReport report;
};

// Per-frame SGD on mean squared error between the predicted map for each
// sampled clip and that frame's pseudo-label. Deterministic per seed.
TrainResult Train(const Dataset& dataset, const TrainConfig& config,
                  const StepObserver& observer = {});

std::string TrainReportToJson(const TrainReport& report,
                              const TrainConfig& config);

}  // namespace pld

#endif  // PLD_TRAIN_H_
