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

#include "pld/pld.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <utility>

#include "json.hpp"
#include "pld/error.h"
#include "pld/eval.h"
#include "pld/model.h"
#include "pld/rng.h"
#include "pld/score.h"
#include "pld/train.h"
#include "pld/video.h"

struct pld_dataset {
  pld::Dataset dataset;
};

struct pld_net {
  pld::PldNet net;
  pld::CheckpointMeta meta;
};

struct pld_scores {
  std::vector<pld::SegmentScore> scores;
};

namespace {

thread_local std::string last_error;

pld_status ToStatus(pld::ErrorCode code) {
  switch (code) {
    case pld::ErrorCode::kInvalidArgument:
      return PLD_ERR_INVALID_ARGUMENT;
    case pld::ErrorCode::kShape:
      return PLD_ERR_SHAPE;
    case pld::ErrorCode::kIo:
      return PLD_ERR_IO;
    case pld::ErrorCode::kFormat:
      return PLD_ERR_FORMAT;
    case pld::ErrorCode::kConfig:
      return PLD_ERR_CONFIG;
    case pld::ErrorCode::kData:
      return PLD_ERR_DATA;
    case pld::ErrorCode::kNonFinite:
      return PLD_ERR_NON_FINITE;
  }
  return PLD_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
pld_status Guard(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return PLD_OK;
  } catch (const pld::Error& e) {
    last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return PLD_ERR_INTERNAL;
}

void Require(bool ok, const char* what) {
  if (!ok) {
    throw pld::Error(pld::ErrorCode::kInvalidArgument,
                     std::string("null argument: ") + what);
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pld::SynthConfig ToSynthConfig(const pld_synth_options& o) {
  pld::SynthConfig c;
  c.videos = o.videos;
  c.segments_per_video = o.segments_per_video;
  c.frames_per_segment = o.frames_per_segment;
  c.height = o.height;
  c.width = o.width;
  c.highlight_fraction = o.highlight_fraction;
  c.seed = o.seed;
  c.background_mean = o.background_mean;
  c.noise_sigma = o.noise_sigma;
  c.square_size = o.square_size;
  c.scenario = o.scenario == PLD_SCENARIO_DISTRACTOR
                   ? pld::SynthScenario::kDistractor
                   : pld::SynthScenario::kBasic;
  return c;
}

std::pair<pld::Dataset, pld::Dataset> GenerateSplits(
    const pld_synth_options& o) {
  if (o.test_videos < 0) {
    throw pld::Error(pld::ErrorCode::kConfig, "test_videos must be >= 0");
  }
  pld::SynthConfig train = ToSynthConfig(o);
  train.seed = pld::DeriveSeed(o.seed, "split/train");
  train.id_prefix = "train";
  pld::Dataset test;
  if (o.test_videos > 0) {
    pld::SynthConfig tc = ToSynthConfig(o);
    tc.videos = o.test_videos;
    tc.seed = pld::DeriveSeed(o.seed, "split/test");
    tc.id_prefix = "test";
    test = pld::GenerateSynthetic(tc);
  }
  return {pld::GenerateSynthetic(train), std::move(test)};
}

}  // namespace

extern "C" {

const char* pld_version(void) { return PLD_VERSION_STRING; }

const char* pld_last_error(void) { return last_error.c_str(); }

const char* pld_status_name(pld_status status) {
  switch (status) {
    case PLD_OK:
      return "ok";
    case PLD_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case PLD_ERR_SHAPE:
      return "shape";
    case PLD_ERR_IO:
      return "io";
    case PLD_ERR_FORMAT:
      return "format";
    case PLD_ERR_CONFIG:
      return "config";
    case PLD_ERR_DATA:
      return "data";
    case PLD_ERR_NON_FINITE:
      return "non_finite";
    case PLD_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void pld_string_free(char* s) { std::free(s); }

void pld_synth_options_init(pld_synth_options* o) {
  if (o == nullptr) return;
  const pld::SynthConfig d;
  o->videos = d.videos;
  o->test_videos = 4;
  o->segments_per_video = d.segments_per_video;
  o->frames_per_segment = d.frames_per_segment;
  o->height = d.height;
  o->width = d.width;
  o->highlight_fraction = d.highlight_fraction;
  o->seed = d.seed;
  o->background_mean = d.background_mean;
  o->noise_sigma = d.noise_sigma;
  o->square_size = d.square_size;
  o->scenario = PLD_SCENARIO_BASIC;
}

pld_status pld_synth_write(const pld_synth_options* options,
                           const char* out_dir) {
  return Guard([&] {
    Require(options && out_dir, "options/out_dir");
    auto [train, test] = GenerateSplits(*options);
    const std::filesystem::path dir(out_dir);
    pld::WriteDataset(train, dir / "train");
    if (!test.videos.empty()) pld::WriteDataset(test, dir / "test");
  });
}

pld_status pld_synth_generate(const pld_synth_options* options,
                              pld_dataset** train, pld_dataset** test) {
  return Guard([&] {
    Require(options && train, "options/train");
    auto [tr, te] = GenerateSplits(*options);
    auto train_handle = std::make_unique<pld_dataset>(pld_dataset{std::move(tr)});
    if (test != nullptr) {
      *test = new pld_dataset{std::move(te)};
    }
    *train = train_handle.release();
  });
}

pld_status pld_dataset_load(const char* manifest_path, pld_dataset** out) {
  return Guard([&] {
    Require(manifest_path && out, "manifest_path/out");
    *out = new pld_dataset{pld::LoadDataset(manifest_path)};
  });
}

pld_status pld_dataset_write(const pld_dataset* dataset, const char* dir) {
  return Guard([&] {
    Require(dataset && dir, "dataset/dir");
    pld::WriteDataset(dataset->dataset, dir);
  });
}

void pld_dataset_free(pld_dataset* dataset) { delete dataset; }

size_t pld_dataset_video_count(const pld_dataset* dataset) {
  return dataset ? dataset->dataset.videos.size() : 0;
}

const char* pld_dataset_video_id(const pld_dataset* dataset, size_t index) {
  if (dataset == nullptr || index >= dataset->dataset.videos.size()) {
    return nullptr;
  }
  return dataset->dataset.videos[index].id.c_str();
}

void pld_train_options_init(pld_train_options* o) {
  if (o == nullptr) return;
  const pld::TrainConfig d;
  o->epochs = d.epochs;
  o->lr = d.lr;
  o->momentum = d.momentum;
  o->clip_length = d.clip_length;
  o->beta = d.beta;
  o->frames_per_segment_sampled = d.frames_per_segment_sampled;
  o->label_mode = PLD_LABEL_SALIENCY;
  o->temporal_mode = PLD_TEMPORAL_SLIDING;
  o->seed = d.seed;
  o->model_config_json = nullptr;
  o->checkpoint_dir = nullptr;
}

pld_status pld_train(const pld_dataset* dataset,
                     const pld_train_options* options, pld_net** net,
                     char** report_json) {
  return Guard([&] {
    Require(dataset && options && net, "dataset/options/net");
    pld::TrainConfig c;
    c.epochs = options->epochs;
    c.lr = options->lr;
    c.momentum = options->momentum;
    c.clip_length = options->clip_length;
    c.beta = options->beta;
    c.frames_per_segment_sampled = options->frames_per_segment_sampled;
    c.label_mode = options->label_mode == PLD_LABEL_BASIC
                       ? pld::LabelMode::kBasic
                       : pld::LabelMode::kSaliency;
    c.temporal_mode = options->temporal_mode == PLD_TEMPORAL_DUPLICATE
                          ? pld::TemporalMode::kDuplicate
                          : pld::TemporalMode::kSliding;
    c.seed = options->seed;
    if (options->model_config_json != nullptr) {
      c.model = pld::ConfigFromJson(options->model_config_json);
    }
    if (options->checkpoint_dir != nullptr) {
      c.checkpoint_dir = options->checkpoint_dir;
    }
    pld::TrainResult result = pld::Train(dataset->dataset, c);
    std::string report = pld::TrainReportToJson(result.report, c);
    char* report_copy = report_json ? CopyString(report) : nullptr;
    *net = new pld_net{std::move(result.net),
                       {c.seed, c.epochs, c.temporal_mode, c.label_mode}};
    if (report_json) *report_json = report_copy;
  });
}

pld_status pld_net_load(const char* checkpoint_dir, pld_net** out) {
  return Guard([&] {
    Require(checkpoint_dir && out, "checkpoint_dir/out");
    pld::Checkpoint ckpt = pld::LoadCheckpoint(checkpoint_dir);
    *out = new pld_net{std::move(ckpt.net), ckpt.meta};
  });
}

pld_status pld_net_save(const pld_net* net, const char* checkpoint_dir) {
  return Guard([&] {
    Require(net && checkpoint_dir, "net/checkpoint_dir");
    pld::SaveCheckpoint(net->net, net->meta, checkpoint_dir);
  });
}

void pld_net_free(pld_net* net) { delete net; }

size_t pld_net_parameter_count(const pld_net* net) {
  return net ? net->net.parameter_count() : 0;
}

pld_status pld_net_config_json(const pld_net* net, char** out_json) {
  return Guard([&] {
    Require(net && out_json, "net/out_json");
    *out_json = CopyString(pld::ConfigToJson(net->net.config()));
  });
}

pld_status pld_score(const pld_net* net, const pld_dataset* dataset,
                     int stride, pld_scores** out) {
  return Guard([&] {
    Require(net && dataset && out, "net/dataset/out");
    const pld::MapPredictor predict =
        pld::NetPredictor(net->net, net->meta.temporal_mode);
    *out = new pld_scores{pld::ScoreDataset(predict, dataset->dataset, stride)};
  });
}

pld_status pld_scores_load(const char* path, pld_scores** out) {
  return Guard([&] {
    Require(path && out, "path/out");
    *out = new pld_scores{pld::ReadScores(path)};
  });
}

pld_status pld_scores_write(const pld_scores* scores, const char* path) {
  return Guard([&] {
    Require(scores && path, "scores/path");
    pld::WriteScores(path, scores->scores);
  });
}

void pld_scores_free(pld_scores* scores) { delete scores; }

size_t pld_scores_count(const pld_scores* scores) {
  return scores ? scores->scores.size() : 0;
}

pld_status pld_scores_get(const pld_scores* scores, size_t index,
                          const char** video_id, int* segment_index,
                          double* score) {
  return Guard([&] {
    Require(scores != nullptr, "scores");
    if (index >= scores->scores.size()) {
      throw pld::Error(pld::ErrorCode::kInvalidArgument,
                       "score index out of range");
    }
    const pld::SegmentScore& s = scores->scores[index];
    if (video_id) *video_id = s.video_id.c_str();
    if (segment_index) *segment_index = s.segment_index;
    if (score) *score = s.score;
  });
}

pld_status pld_scores_highlights_json(const pld_scores* scores, int top_k,
                                      char** out_json) {
  return Guard([&] {
    Require(scores && out_json, "scores/out_json");
    std::vector<std::string> order;
    std::map<std::string, std::vector<pld::SegmentScore>> by_video;
    for (const pld::SegmentScore& s : scores->scores) {
      if (!by_video.count(s.video_id)) order.push_back(s.video_id);
      by_video[s.video_id].push_back(s);
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const std::string& id : order) {
      j[id] = pld::SelectHighlights(by_video[id], top_k);
    }
    *out_json = CopyString(j.dump(2) + "\n");
  });
}

pld_status pld_infer_video(const pld_net* net, const pld_dataset* dataset,
                           const char* video_id, int stride,
                           const char* out_dir, size_t* maps_written) {
  return Guard([&] {
    Require(net && dataset && video_id && out_dir, "net/dataset/video_id/out_dir");
    const pld::VideoRecord& video = dataset->dataset.Find(video_id);
    const auto paths = pld::ExportDistinctionMaps(
        pld::NetPredictor(net->net, net->meta.temporal_mode), video, stride,
        out_dir);
    if (maps_written) *maps_written = paths.size();
  });
}

pld_status pld_average_precision(const int* ranked, size_t count, double* out) {
  return Guard([&] {
    Require(out && (ranked || count == 0), "ranked/out");
    *out = pld::AveragePrecision(std::span<const int>(ranked, count));
  });
}

pld_status pld_ap_at_k(const int* ranked, size_t count, int k, double* out) {
  return Guard([&] {
    Require(out && (ranked || count == 0), "ranked/out");
    *out = pld::ApAtK(std::span<const int>(ranked, count), k);
  });
}

pld_status pld_eval(const pld_scores* scores, const pld_dataset* dataset,
                    pld_metric metric, int random_trials, uint64_t seed,
                    char** report_json, double* overall) {
  return Guard([&] {
    Require(scores && dataset, "scores/dataset");
    const pld::Metric m =
        metric == PLD_METRIC_AP5 ? pld::Metric::kAp5 : pld::Metric::kMap;
    pld::EvalReport report =
        pld::EvaluateScores(scores->scores, dataset->dataset, m);
    if (random_trials > 0) {
      report.random_baseline =
          pld::RandomBaseline(dataset->dataset, m, random_trials, seed);
    }
    if (overall) *overall = report.overall;
    if (report_json) *report_json = CopyString(pld::EvalReportToJson(report));
  });
}

pld_status pld_gradcheck(const char* config_name, uint64_t seed, float epsilon,
                         double* max_relative_error, char** report_json) {
  return Guard([&] {
    Require(config_name && max_relative_error, "config_name/max_relative_error");
    const std::string name(config_name);
    pld::GradCheckResult result;
    if (name == "toy") {
      result = pld::ToyModelGradCheck(seed, epsilon);
    } else if (name == "linear") {
      result = pld::LinearModelGradCheck(seed, epsilon);
    } else {
      throw pld::Error(pld::ErrorCode::kInvalidArgument,
                       "unknown gradcheck config '" + name + "'");
    }
    *max_relative_error = result.max_relative_error;
    if (report_json) {
      nlohmann::ordered_json j;
      j["config"] = name;
      j["seed"] = seed;
      j["epsilon"] = epsilon;
      j["max_relative_error"] = result.max_relative_error;
      j["worst_parameter"] = result.worst_parameter;
      j["values_checked"] = result.checked_values;
      j["values_shrunk"] = result.shrunk_values;
      j["values_skipped"] = result.skipped_values;
      nlohmann::ordered_json per = nlohmann::ordered_json::array();
      for (const pld::ParameterGradError& e : result.per_parameter) {
        per.push_back({{"name", e.name},
                       {"relative_error", e.relative_error},
                       {"analytic_norm", e.analytic_norm},
                       {"numeric_norm", e.numeric_norm}});
      }
      j["per_parameter"] = per;
      *report_json = CopyString(j.dump(2));
    }
  });
}

}  // extern "C"
