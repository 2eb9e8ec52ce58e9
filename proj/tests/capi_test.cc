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

#include <cstring>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "pld/pld.h"

namespace {

namespace fs = std::filesystem;

// Owns a pld-allocated string.
struct CString {
  char* p = nullptr;
  ~CString() { pld_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pld_capi_" + name);
  fs::remove_all(dir);
  return dir;
}

pld_synth_options SmallSynth() {
  pld_synth_options o;
  pld_synth_options_init(&o);
  o.videos = 2;
  o.test_videos = 1;
  o.segments_per_video = 4;
  o.frames_per_segment = 5;
  o.height = 8;
  o.width = 8;
  o.square_size = 3;
  o.seed = 2;
  return o;
}

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(pld_version()), 0u);
  EXPECT_STREQ(pld_status_name(PLD_OK), "ok");
  EXPECT_STREQ(pld_status_name(PLD_ERR_IO), "io");
  EXPECT_STREQ(pld_status_name(PLD_ERR_SHAPE), "shape");
  pld_string_free(nullptr);
}

TEST(CApiTest, NullArgumentsAreRejected) {
  pld_dataset* d = nullptr;
  EXPECT_EQ(pld_dataset_load(nullptr, &d), PLD_ERR_INVALID_ARGUMENT);
  EXPECT_GT(std::strlen(pld_last_error()), 0u);
  EXPECT_EQ(pld_average_precision(nullptr, 3, nullptr), PLD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pld_dataset_video_count(nullptr), 0u);
  pld_dataset_free(nullptr);
  pld_net_free(nullptr);
  pld_scores_free(nullptr);
}

TEST(CApiTest, MissingManifestIsIoError) {
  pld_dataset* d = nullptr;
  EXPECT_EQ(pld_dataset_load("/nonexistent/dataset.json", &d), PLD_ERR_IO);
  EXPECT_EQ(d, nullptr);
  EXPECT_NE(std::string(pld_last_error()).find("nonexistent"), std::string::npos);
}

TEST(CApiTest, AveragePrecision) {
  const int ranked[] = {0, 1, 0, 1};
  double ap = -1.0;
  ASSERT_EQ(pld_average_precision(ranked, 4, &ap), PLD_OK);
  EXPECT_DOUBLE_EQ(ap, 0.5);
  ASSERT_EQ(pld_ap_at_k(ranked, 4, 2, &ap), PLD_OK);
  EXPECT_DOUBLE_EQ(ap, 0.25);
  EXPECT_EQ(pld_ap_at_k(ranked, 4, 0, &ap), PLD_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, GradcheckReport) {
  double err = 1.0;
  CString report;
  ASSERT_EQ(pld_gradcheck("linear", 0, 1e-3f, &err, &report.p), PLD_OK);
  EXPECT_LT(err, 1e-4);
  EXPECT_NE(report.str().find("\"per_parameter\""), std::string::npos);
  EXPECT_EQ(pld_gradcheck("huge", 0, 1e-3f, &err, nullptr), PLD_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, SynthTrainScoreEvalPipeline) {
  const fs::path dir = FreshDir("pipeline");
  const pld_synth_options synth = SmallSynth();
  ASSERT_EQ(pld_synth_write(&synth, dir.c_str()), PLD_OK) << pld_last_error();
  pld_dataset* train = nullptr;
  pld_dataset* test = nullptr;
  ASSERT_EQ(pld_dataset_load((dir / "train" / "dataset.json").c_str(), &train), PLD_OK);
  ASSERT_EQ(pld_dataset_load((dir / "test" / "dataset.json").c_str(), &test), PLD_OK);
  EXPECT_EQ(pld_dataset_video_count(train), 2u);
  EXPECT_EQ(pld_dataset_video_count(test), 1u);
  EXPECT_EQ(pld_dataset_video_id(train, 5), nullptr);

  pld_train_options opts;
  pld_train_options_init(&opts);
  opts.epochs = 1;
  opts.frames_per_segment_sampled = 1;
  const std::string ckpt = (dir / "ckpt").string();
  opts.checkpoint_dir = ckpt.c_str();
  pld_net* net = nullptr;
  CString report;
  ASSERT_EQ(pld_train(train, &opts, &net, &report.p), PLD_OK) << pld_last_error();
  EXPECT_NE(report.str().find("epoch_losses"), std::string::npos);
  EXPECT_GT(pld_net_parameter_count(net), 0u);

  pld_net* loaded = nullptr;
  ASSERT_EQ(pld_net_load(ckpt.c_str(), &loaded), PLD_OK);
  EXPECT_EQ(pld_net_parameter_count(loaded), pld_net_parameter_count(net));

  pld_scores* scores = nullptr;
  ASSERT_EQ(pld_score(loaded, test, 1, &scores), PLD_OK);
  ASSERT_EQ(pld_scores_count(scores), 4u);
  const char* vid = nullptr;
  int seg = -1;
  double value = -1.0;
  ASSERT_EQ(pld_scores_get(scores, 2, &vid, &seg, &value), PLD_OK);
  EXPECT_EQ(seg, 2);
  EXPECT_GT(value, 0.0);
  EXPECT_LT(value, 1.0);
  EXPECT_EQ(pld_scores_get(scores, 9, &vid, &seg, &value), PLD_ERR_INVALID_ARGUMENT);

  CString highlights;
  ASSERT_EQ(pld_scores_highlights_json(scores, 2, &highlights.p), PLD_OK);
  EXPECT_NE(highlights.str().find(vid), std::string::npos);

  CString eval;
  double overall = -1.0;
  ASSERT_EQ(pld_eval(scores, test, PLD_METRIC_MAP, 20, 0, &eval.p, &overall), PLD_OK);
  EXPECT_GE(overall, 0.0);
  EXPECT_LE(overall, 1.0);
  EXPECT_NE(eval.str().find("random_baseline"), std::string::npos);

  size_t maps = 0;
  ASSERT_EQ(pld_infer_video(loaded, test, vid, 5, (dir / "maps").c_str(), &maps), PLD_OK);
  EXPECT_EQ(maps, 4u);
  EXPECT_EQ(pld_infer_video(loaded, test, "nope", 1, (dir / "maps").c_str(), &maps),
            PLD_ERR_INVALID_ARGUMENT);

  pld_scores_free(scores);
  pld_net_free(loaded);
  pld_net_free(net);
  pld_dataset_free(train);
  pld_dataset_free(test);
  fs::remove_all(dir);
}

TEST(CApiTest, InvalidTrainOptionsAreConfigErrors) {
  const pld_synth_options synth = SmallSynth();
  pld_dataset* train = nullptr;
  pld_dataset* test = nullptr;
  ASSERT_EQ(pld_synth_generate(&synth, &train, &test), PLD_OK);
  pld_train_options opts;
  pld_train_options_init(&opts);
  opts.epochs = 0;
  pld_net* net = nullptr;
  EXPECT_EQ(pld_train(train, &opts, &net, nullptr), PLD_ERR_CONFIG);
  EXPECT_EQ(net, nullptr);
  pld_dataset_free(train);
  pld_dataset_free(test);
}

}  // namespace
