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

// pld: command-line front end over the C API.
//
//   pld synth     --out data/ [--seed S] ...
//   pld train     --data train/dataset.json --out ckpt/ ...
//   pld score     --ckpt ckpt/ --data test/dataset.json --out scores.json
//   pld infer     --ckpt ckpt/ --data test/dataset.json --video ID --out maps/
//   pld eval      --scores scores.json --data test/dataset.json --out report.json
//   pld gradcheck --config toy
//
// Exit codes: 0 success, 1 runtime or validation failure (one line
// "pld: error: <category>: <message>" on stderr), 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pld/pld.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kGradcheckThreshold = 1e-2;

class Failure : public std::runtime_error {
 public:
  Failure(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

void Check(pld_status status) {
  if (status != PLD_OK) throw Failure(pld_status_name(status), pld_last_error());
}

struct DatasetDeleter {
  void operator()(pld_dataset* d) const { pld_dataset_free(d); }
};
struct NetDeleter {
  void operator()(pld_net* n) const { pld_net_free(n); }
};
struct ScoresDeleter {
  void operator()(pld_scores* s) const { pld_scores_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { pld_string_free(s); }
};
using DatasetPtr = std::unique_ptr<pld_dataset, DatasetDeleter>;
using NetPtr = std::unique_ptr<pld_net, NetDeleter>;
using ScoresPtr = std::unique_ptr<pld_scores, ScoresDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

DatasetPtr LoadDataset(const std::string& path) {
  pld_dataset* d = nullptr;
  Check(pld_dataset_load(path.c_str(), &d));
  return DatasetPtr(d);
}

NetPtr LoadNet(const std::string& dir) {
  pld_net* n = nullptr;
  Check(pld_net_load(dir.c_str(), &n));
  return NetPtr(n);
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Failure("io", "cannot write " + path.string());
}

// Run manifest for an output directory (<dir>/run.json) or an output file
// (<stem>.run.json beside it). Artifact paths are relative to the manifest.
void WriteRunManifest(const fs::path& manifest, const std::string& command,
                      const ordered_json& config, std::uint64_t seed,
                      const std::vector<std::string>& artifacts) {
  ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["artifacts"] = artifacts;
  j["tool_version"] = pld_version();
  WriteText(manifest, j.dump(2) + "\n");
}

fs::path ManifestBeside(const fs::path& file) {
  fs::path p = file;
  p.replace_extension(".run.json");
  return p;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::string scenario = "basic";
  pld_synth_options options{};
};

void RunSynth(SynthArgs& a) {
  if (a.scenario == "basic") {
    a.options.scenario = PLD_SCENARIO_BASIC;
  } else if (a.scenario == "distractor") {
    a.options.scenario = PLD_SCENARIO_DISTRACTOR;
  } else {
    throw Failure("invalid_argument", "unknown scenario '" + a.scenario + "'");
  }
  Check(pld_synth_write(&a.options, a.out.c_str()));
  const pld_synth_options& o = a.options;
  ordered_json config = {{"videos", o.videos},
                         {"test_videos", o.test_videos},
                         {"segments_per_video", o.segments_per_video},
                         {"frames_per_segment", o.frames_per_segment},
                         {"height", o.height},
                         {"width", o.width},
                         {"highlight_fraction", o.highlight_fraction},
                         {"background_mean", o.background_mean},
                         {"noise_sigma", o.noise_sigma},
                         {"square_size", o.square_size},
                         {"scenario", a.scenario}};
  std::vector<std::string> artifacts = {"train/dataset.json"};
  if (o.test_videos > 0) artifacts.push_back("test/dataset.json");
  WriteRunManifest(fs::path(a.out) / "run.json", "synth", config, o.seed,
                   artifacts);
  std::cout << "wrote " << (fs::path(a.out) / "train" / "dataset.json").string()
            << "\n";
  if (o.test_videos > 0) {
    std::cout << "wrote " << (fs::path(a.out) / "test" / "dataset.json").string()
              << "\n";
  }
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out;
  std::string label_mode = "saliency";
  std::string temporal_mode = "sliding";
  std::string model_config;
  pld_train_options options{};
};

void RunTrain(TrainArgs& a) {
  pld_train_options& o = a.options;
  if (a.label_mode == "basic") {
    o.label_mode = PLD_LABEL_BASIC;
  } else if (a.label_mode == "saliency") {
    o.label_mode = PLD_LABEL_SALIENCY;
  } else {
    throw Failure("invalid_argument", "unknown label mode '" + a.label_mode + "'");
  }
  if (a.temporal_mode == "sliding") {
    o.temporal_mode = PLD_TEMPORAL_SLIDING;
  } else if (a.temporal_mode == "duplicate") {
    o.temporal_mode = PLD_TEMPORAL_DUPLICATE;
  } else {
    throw Failure("invalid_argument",
                  "unknown temporal mode '" + a.temporal_mode + "'");
  }
  std::string model_json;
  if (!a.model_config.empty()) {
    std::ifstream in(a.model_config);
    if (!in) throw Failure("io", "cannot read " + a.model_config);
    model_json.assign(std::istreambuf_iterator<char>(in), {});
    o.model_config_json = model_json.c_str();
  }
  o.checkpoint_dir = a.out.c_str();

  DatasetPtr dataset = LoadDataset(a.data);
  pld_net* raw_net = nullptr;
  char* raw_report = nullptr;
  Check(pld_train(dataset.get(), &o, &raw_net, &raw_report));
  NetPtr net(raw_net);
  StringPtr report(raw_report);
  WriteText(fs::path(a.out) / "train_report.json", std::string(report.get()) + "\n");

  StringPtr model_cfg;
  {
    char* s = nullptr;
    Check(pld_net_config_json(net.get(), &s));
    model_cfg.reset(s);
  }
  ordered_json config = {{"data", a.data},
                         {"epochs", o.epochs},
                         {"lr", o.lr},
                         {"momentum", o.momentum},
                         {"clip_length", o.clip_length},
                         {"beta", o.beta},
                         {"frames_per_segment_sampled", o.frames_per_segment_sampled},
                         {"label_mode", a.label_mode},
                         {"temporal_mode", a.temporal_mode},
                         {"model", ordered_json::parse(model_cfg.get())}};
  WriteRunManifest(fs::path(a.out) / "run.json", "train", config, o.seed,
                   {"checkpoint.json", "train_report.json"});
  std::cout << report.get() << "\n";
}

// ---- score / infer ----------------------------------------------------------

struct ScoreArgs {
  std::string ckpt;
  std::string data;
  std::string out;
  int stride = 1;
  int top_k = 0;
};

void RunScore(const ScoreArgs& a) {
  NetPtr net = LoadNet(a.ckpt);
  DatasetPtr dataset = LoadDataset(a.data);
  pld_scores* raw = nullptr;
  Check(pld_score(net.get(), dataset.get(), a.stride, &raw));
  ScoresPtr scores(raw);
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  Check(pld_scores_write(scores.get(), a.out.c_str()));
  std::vector<std::string> artifacts = {out.filename().string()};
  if (a.top_k > 0) {
    char* s = nullptr;
    Check(pld_scores_highlights_json(scores.get(), a.top_k, &s));
    StringPtr highlights(s);
    fs::path hpath = out;
    hpath.replace_extension(".highlights.json");
    WriteText(hpath, highlights.get());
    artifacts.push_back(hpath.filename().string());
  }
  ordered_json config = {{"ckpt", a.ckpt},
                         {"data", a.data},
                         {"stride", a.stride},
                         {"top_k", a.top_k}};
  WriteRunManifest(ManifestBeside(out), "score", config, 0, artifacts);
  std::cout << "scored " << pld_scores_count(scores.get()) << " segments -> "
            << a.out << "\n";
}

struct InferArgs {
  std::string ckpt;
  std::string data;
  std::string video;
  std::string out;
  int stride = 1;
};

void RunInfer(const InferArgs& a) {
  NetPtr net = LoadNet(a.ckpt);
  DatasetPtr dataset = LoadDataset(a.data);
  size_t written = 0;
  Check(pld_infer_video(net.get(), dataset.get(), a.video.c_str(), a.stride,
                        a.out.c_str(), &written));
  ordered_json config = {{"ckpt", a.ckpt},
                         {"data", a.data},
                         {"video", a.video},
                         {"stride", a.stride}};
  WriteRunManifest(fs::path(a.out) / "run.json", "infer", config, 0,
                   {"map_*.pldt", "map_*.pgm"});
  std::cout << "wrote " << written << " distinction maps to " << a.out << "\n";
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string scores;
  std::string data;
  std::string metric = "map";
  std::string out;
  int random_trials = 0;
  std::uint64_t seed = 0;
};

void RunEval(const EvalArgs& a) {
  pld_metric metric;
  if (a.metric == "map") {
    metric = PLD_METRIC_MAP;
  } else if (a.metric == "ap5") {
    metric = PLD_METRIC_AP5;
  } else {
    throw Failure("invalid_argument", "unknown metric '" + a.metric + "'");
  }
  pld_scores* raw = nullptr;
  Check(pld_scores_load(a.scores.c_str(), &raw));
  ScoresPtr scores(raw);
  DatasetPtr dataset = LoadDataset(a.data);
  char* s = nullptr;
  double overall = 0.0;
  Check(pld_eval(scores.get(), dataset.get(), metric, a.random_trials, a.seed,
                 &s, &overall));
  StringPtr report(s);
  if (!a.out.empty()) {
    WriteText(a.out, report.get());
    ordered_json config = {{"scores", a.scores},
                           {"data", a.data},
                           {"metric", a.metric},
                           {"random_trials", a.random_trials}};
    WriteRunManifest(ManifestBeside(a.out), "eval", config, a.seed,
                     {fs::path(a.out).filename().string()});
  }
  std::cout << report.get();
}

// ---- gradcheck --------------------------------------------------------------

struct GradcheckArgs {
  std::string config = "toy";
  std::uint64_t seed = 0;
  float epsilon = 1e-3f;
};

int RunGradcheck(const GradcheckArgs& a) {
  double max_rel = 0.0;
  char* s = nullptr;
  Check(pld_gradcheck(a.config.c_str(), a.seed, a.epsilon, &max_rel, &s));
  StringPtr report(s);
  const bool passed = max_rel < kGradcheckThreshold;
  ordered_json j = ordered_json::parse(report.get());
  j["threshold"] = kGradcheckThreshold;
  j["passed"] = passed;
  std::cout << j.dump(2) << "\n";
  if (!passed) {
    std::cerr << "pld: error: gradcheck: max relative error " << max_rel
              << " >= " << kGradcheckThreshold << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pixel-level distinction video highlight detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pld_version()));

  SynthArgs synth;
  pld_synth_options_init(&synth.options);
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic train/test dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.options.seed, "Seed for all randomness")
      ->capture_default_str();
  synth_cmd->add_option("--videos", synth.options.videos, "Training videos")
      ->capture_default_str();
  synth_cmd->add_option("--test-videos", synth.options.test_videos, "Test videos")
      ->capture_default_str();
  synth_cmd->add_option("--segments", synth.options.segments_per_video,
                        "Segments per video")
      ->capture_default_str();
  synth_cmd->add_option("--frames-per-segment", synth.options.frames_per_segment,
                        "Frames per segment")
      ->capture_default_str();
  synth_cmd->add_option("--height", synth.options.height)->capture_default_str();
  synth_cmd->add_option("--width", synth.options.width)->capture_default_str();
  synth_cmd->add_option("--highlight-fraction", synth.options.highlight_fraction,
                        "Fraction of highlight segments per video, in (0, 1)")
      ->capture_default_str();
  synth_cmd->add_option("--noise-sigma", synth.options.noise_sigma,
                        "Background noise standard deviation")
      ->capture_default_str();
  synth_cmd->add_option("--background-mean", synth.options.background_mean)
      ->capture_default_str();
  synth_cmd->add_option("--square-size", synth.options.square_size,
                        "Side of the bright square, pixels")
      ->capture_default_str();
  synth_cmd->add_option("--scenario", synth.scenario,
                        "basic: square only in highlights; distractor: square "
                        "everywhere, moving only in highlights")
      ->check(CLI::IsMember({"basic", "distractor"}))
      ->capture_default_str();

  TrainArgs train;
  pld_train_options_init(&train.options);
  auto* train_cmd = app.add_subcommand("train", "Train the encoder-decoder on pseudo-labels");
  train_cmd->add_option("--data", train.data, "Training dataset.json")->required();
  train_cmd->add_option("--out", train.out, "Checkpoint directory")->required();
  train_cmd->add_option("--epochs", train.options.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.options.lr, "SGD learning rate")
      ->capture_default_str();
  train_cmd->add_option("--momentum", train.options.momentum, "SGD momentum")
      ->capture_default_str();
  train_cmd->add_option("--clip-len", train.options.clip_length,
                        "Frames per clip (the target frame plus its predecessors)")
      ->capture_default_str();
  train_cmd->add_option("--beta", train.options.beta,
                        "Saliency threshold: a highlight pixel is labeled 1 only "
                        "where its saliency is > beta")
      ->capture_default_str();
  train_cmd->add_option("--frames-per-segment-sampled",
                        train.options.frames_per_segment_sampled,
                        "Target frames drawn per segment each epoch")
      ->capture_default_str();
  train_cmd->add_option("--label-mode", train.label_mode,
                        "basic: segment label on every pixel; saliency: "
                        "highlight pixels gated by the saliency mask")
      ->check(CLI::IsMember({"basic", "saliency"}))
      ->capture_default_str();
  train_cmd->add_option("--temporal-mode", train.temporal_mode,
                        "sliding: target frame and its predecessors; "
                        "duplicate: the target frame repeated")
      ->check(CLI::IsMember({"sliding", "duplicate"}))
      ->capture_default_str();
  train_cmd->add_option("--seed", train.options.seed)->capture_default_str();
  train_cmd->add_option("--model-config", train.model_config,
                        "Model topology JSON (default: desk config)");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score every segment by its mean pixel distinction");
  score_cmd->add_option("--ckpt", score.ckpt, "Checkpoint directory")->required();
  score_cmd->add_option("--data", score.data, "dataset.json to score")->required();
  score_cmd->add_option("--out", score.out, "Output scores.json")->required();
  score_cmd->add_option("--stride", score.stride,
                        "Evaluate every stride-th frame (1 = every frame)")
      ->capture_default_str();
  score_cmd->add_option("--top-k", score.top_k,
                        "Also write the top-k segments per video (0 = off)")
      ->capture_default_str();

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Export per-frame distinction maps for one video");
  infer_cmd->add_option("--ckpt", infer.ckpt, "Checkpoint directory")->required();
  infer_cmd->add_option("--data", infer.data, "dataset.json holding the video")->required();
  infer_cmd->add_option("--video", infer.video, "Video id")->required();
  infer_cmd->add_option("--out", infer.out, "Output directory")->required();
  infer_cmd->add_option("--stride", infer.stride)->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Mean average precision of segment scores");
  eval_cmd->add_option("--scores", eval.scores, "scores.json")->required();
  eval_cmd->add_option("--data", eval.data, "Ground-truth dataset.json")->required();
  eval_cmd->add_option("--metric", eval.metric,
                       "map: full-list AP; ap5: AP truncated to the top 5")
      ->check(CLI::IsMember({"map", "ap5"}))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Report JSON path");
  eval_cmd->add_option("--random-trials", eval.random_trials,
                       "Add a random-scorer baseline averaged over N draws")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Seed for the random baseline")
      ->capture_default_str();

  GradcheckArgs grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad_cmd->add_option("--config", grad.config, "toy | linear")
      ->check(CLI::IsMember({"toy", "linear"}))
      ->capture_default_str();
  grad_cmd->add_option("--seed", grad.seed)->capture_default_str();
  grad_cmd->add_option("--epsilon", grad.epsilon, "Central difference step")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pld: error: usage: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty()
                              ? &app
                              : app.get_subcommands().front();
    std::cerr << sub->help();
    return 2;
  }

  try {
    if (*synth_cmd) RunSynth(synth);
    if (*train_cmd) RunTrain(train);
    if (*score_cmd) RunScore(score);
    if (*infer_cmd) RunInfer(infer);
    if (*eval_cmd) RunEval(eval);
    if (*grad_cmd) return RunGradcheck(grad);
  } catch (const Failure& f) {
    std::cerr << "pld: error: " << f.category() << ": " << f.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pld: error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
