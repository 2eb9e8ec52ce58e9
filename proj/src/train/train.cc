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

#include "pld/train.h"

#include <chrono>
#include <cmath>

#include "json.hpp"
#include "pld/error.h"
#include "pld/optim.h"
#include "pld/rng.h"

namespace pld {
using nlohmann::json;

void ValidateTrainConfig(const TrainConfig& c) {
  if (c.epochs < 1) throw Error(ErrorCode::kConfig, "epochs must be >= 1");
  if (!(c.lr >= 0.0f) || !std::isfinite(c.lr)) {
    throw Error(ErrorCode::kConfig, "lr must be finite and >= 0");
  }
  if (!(c.momentum >= 0.0f && c.momentum < 1.0f)) {
    throw Error(ErrorCode::kConfig, "momentum must be in [0, 1)");
  }
  if (c.clip_length < 1) throw Error(ErrorCode::kConfig, "clip length must be >= 1");
  if (!(c.beta >= 0.0f)) throw Error(ErrorCode::kConfig, "beta must be >= 0");
  if (c.frames_per_segment_sampled < 1) {
    throw Error(ErrorCode::kConfig, "frames per segment must be >= 1");
  }
}

std::vector<TargetFrame> SampleTargets(const Dataset& dataset, int per_segment,
                                       std::uint64_t seed) {
  if (per_segment < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  }
  Rng rng(seed);
  std::vector<TargetFrame> targets;
  for (std::size_t v = 0; v < dataset.videos.size(); ++v) {
    for (const Segment& s : dataset.videos[v].segments) {
      const int n = s.length();
      const int take = std::min(per_segment, n);
      std::vector<int> frames(n);
      for (int i = 0; i < n; ++i) frames[i] = s.start + i;
      // Partial Fisher-Yates: the first `take` slots are the sample.
      for (int i = 0; i < take; ++i) {
        const int j = i + static_cast<int>(rng.UniformInt(n - i));
        std::swap(frames[i], frames[j]);
      }
      std::sort(frames.begin(), frames.begin() + take);
      for (int i = 0; i < take; ++i) {
        targets.push_back({static_cast<int>(v), frames[i]});
      }
    }
  }
  return targets;
}

std::vector<TargetFrame> EpochTargets(const Dataset& dataset,
                                      const TrainConfig& config, int epoch) {
  std::vector<TargetFrame> targets =
      SampleTargets(dataset, config.frames_per_segment_sampled,
                    DeriveSeed(config.seed, "train/targets", epoch));
  Rng order(DeriveSeed(config.seed, "train/order", epoch));
  order.Shuffle(targets);
  return targets;
}

namespace {

PldNetConfig ResolveModel(const Dataset& dataset, const TrainConfig& config) {
  const VideoRecord& first = dataset.videos.front();
  for (const VideoRecord& v : dataset.videos) {
    if (v.height() != first.height() || v.width() != first.width() ||
        v.channels() != first.channels()) {
      throw Error(ErrorCode::kData, "video '" + v.id +
                                        "' frame shape differs from '" +
                                        first.id + "'");
    }
    if (v.frame_count() < config.clip_length) {
      throw Error(ErrorCode::kData, "video '" + v.id + "' is shorter than the clip length");
    }
  }
  PldNetConfig model = config.model ? *config.model
                                    : PldNetConfig::Desk(config.clip_length,
                                                         first.height(),
                                                         first.width(),
                                                         first.channels());
  if (model.clip_length != config.clip_length ||
      model.height != first.height() || model.width != first.width() ||
      model.in_channels != first.channels()) {
    throw Error(ErrorCode::kConfig,
                "model config input does not match the data and clip length");
  }
  return model;
}

}  // namespace

TrainResult Train(const Dataset& dataset, const TrainConfig& config,
                  const StepObserver& observer) {
  ValidateTrainConfig(config);
  if (dataset.videos.empty()) {
    throw Error(ErrorCode::kData, "training dataset is empty");
  }
  if (config.label_mode == LabelMode::kSaliency) {
    for (const VideoRecord& v : dataset.videos) {
      if (!v.has_saliency()) {
        throw Error(ErrorCode::kConfig,
                    "label mode 'saliency' needs saliency masks, video '" +
                        v.id + "' has none");
      }
    }
  }
  const auto started = std::chrono::steady_clock::now();
  PldNet net = PldNet::Init(ResolveModel(dataset, config), config.seed);
  const std::vector<int> out_shape{1, 1, net.config().height,
                                   net.config().width};
  Sgd optimizer(config.lr, config.momentum);
  TrainReport report;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<TargetFrame> targets = EpochTargets(dataset, config, epoch);
    double total = 0.0;
    for (std::size_t step = 0; step < targets.size(); ++step) {
      const TargetFrame& target = targets[step];
      const VideoRecord& video = dataset.videos[target.video_index];
      const Clip clip = MakeClip(video, target.frame, config.clip_length,
                                 config.temporal_mode);
      const DistinctionMap label =
          MakeLabel(video, target.frame, config.label_mode, config.beta);

      Tape tape;
      const Var prediction = net.Forward(tape, tape.Constant(clip.ToTensor()));
      const Var loss = tape.MseLoss(
          prediction, tape.Constant(label.values.Reshaped(out_shape)));
      const double loss_value = tape.value(loss)[0];
      if (!std::isfinite(loss_value)) {
        throw Error(ErrorCode::kNonFinite,
                    "non-finite loss at epoch " + std::to_string(epoch + 1) +
                        ", step " + std::to_string(step) + " (video '" +
                        video.id + "', frame " + std::to_string(target.frame) +
                        ")");
      }
      if (observer) observer({epoch, step, target, loss_value}, net);
      ZeroGrads(net.parameters());
      tape.Backward(loss);
      optimizer.Step(net.parameters());
      total += loss_value;
      ++report.steps;
    }
    report.epoch_losses.push_back(total / static_cast<double>(targets.size()));
  }

  if (!config.checkpoint_dir.empty()) {
    SaveCheckpoint(net,
                   {config.seed, config.epochs, config.temporal_mode,
                    config.label_mode},
                   config.checkpoint_dir);
    report.checkpoint_path = config.checkpoint_dir.string();
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return {std::move(net), std::move(report)};
}

std::string TrainReportToJson(const TrainReport& report,
                              const TrainConfig& config) {
  json j = {{"epoch_losses", report.epoch_losses},
            {"checkpoint", report.checkpoint_path},
            {"wall_clock_seconds", report.wall_clock_seconds},
            {"steps", report.steps},
            {"config",
             {{"epochs", config.epochs},
              {"lr", config.lr},
              {"momentum", config.momentum},
              {"clip_length", config.clip_length},
              {"beta", config.beta},
              {"frames_per_segment_sampled", config.frames_per_segment_sampled},
              {"label_mode", LabelModeName(config.label_mode)},
              {"temporal_mode", TemporalModeName(config.temporal_mode)},
              {"seed", config.seed}}}};
  return j.dump(2);
}

}  // namespace pld
