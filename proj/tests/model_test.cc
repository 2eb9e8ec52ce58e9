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

#include <cmath>

#include <gtest/gtest.h>

#include "pld/error.h"
#include "pld/model.h"
#include "pld/rng.h"
#include "test_util.h"

namespace pld {
namespace {

using testing::RandomTensor;
using testing::TempDir;

std::size_t ConvParams(int out, int in, const Triple& k) {
  return static_cast<std::size_t>(out) * in * k[0] * k[1] * k[2] + out;
}

// Parameter count worked out stage by stage from the config.
std::size_t OracleParameterCount(const PldNetConfig& c) {
  std::size_t total = 0;
  int in = c.in_channels;
  for (const EncoderStage& s : c.encoder) {
    total += ConvParams(s.out_channels, in, s.kernel);
    in = s.out_channels;
  }
  for (const DecoderStage& s : c.decoder) {
    total += ConvParams(s.out_channels, in, s.kernel);
    in = s.out_channels;
  }
  return total + ConvParams(1, in, c.head_kernel);
}

std::string ConfigErrorOf(const PldNetConfig& c) {
  try {
    ValidateConfig(c);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    return e.what();
  }
  return "";
}

TEST(ModelConfigTest, DeskAndToyParameterCounts) {
  const PldNetConfig desk = PldNetConfig::Desk(4, 32, 32);
  EXPECT_EQ(OracleParameterCount(desk), 5449u);
  EXPECT_EQ(PldNet::Init(desk, 0).parameter_count(), 5449u);
  const PldNetConfig toy = PldNetConfig::Toy();
  EXPECT_EQ(PldNet::Init(toy, 0).parameter_count(), 391u);
  EXPECT_LT(OracleParameterCount(toy), 500u);
}

TEST(ModelConfigTest, DeskValidForRangeOfClipLengths) {
  for (int l = 1; l <= 12; ++l) {
    const PldNetConfig c = PldNetConfig::Desk(l, 16, 24, l % 2 ? 1 : 3);
    EXPECT_EQ(ConfigErrorOf(c), "") << "L=" << l;
    EXPECT_EQ(PldNet::Init(c, 1).parameter_count(), OracleParameterCount(c));
  }
}

TEST(ModelConfigTest, ErrorsNameTheStage) {
  PldNetConfig c = PldNetConfig::Desk(4, 32, 32);
  c.encoder[1].stride[0] = 1;
  EXPECT_NE(ConfigErrorOf(c).find("encoder[1]"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.decoder[0].upsample = {1, 3, 3};
  EXPECT_NE(ConfigErrorOf(c).find("head"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.decoder[1].out_channels = 0;
  EXPECT_NE(ConfigErrorOf(c).find("decoder[1]"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.head_kernel = {1, 2, 2};
  EXPECT_NE(ConfigErrorOf(c).find("head"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.encoder[0].kernel = {9, 3, 3};
  EXPECT_NE(ConfigErrorOf(c).find("encoder[0]"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.encoder.clear();
  EXPECT_NE(ConfigErrorOf(c).find("encoder"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.output_prior = 1.0f;
  EXPECT_NE(ConfigErrorOf(c).find("head"), std::string::npos);

  c = PldNetConfig::Desk(4, 32, 32);
  c.clip_length = 0;
  EXPECT_NE(ConfigErrorOf(c).find("input"), std::string::npos);
}

TEST(ModelConfigTest, JsonRoundTrip) {
  PldNetConfig c = PldNetConfig::Desk(6, 16, 16, 3);
  c.output_prior = 0.2f;
  c.head_kernel = {1, 3, 3};
  EXPECT_TRUE(ConfigFromJson(ConfigToJson(c)) == c);
  EXPECT_FALSE(ConfigFromJson(ConfigToJson(PldNetConfig::Toy())) == c);
  EXPECT_THROW(ConfigFromJson("{\"in_channels\": 1}"), Error);
  EXPECT_THROW(ConfigFromJson("[]"), Error);
}

TEST(ModelInitTest, DeterministicPerSeed) {
  const PldNetConfig c = PldNetConfig::Toy();
  const PldNet a = PldNet::Init(c, 9);
  const PldNet b = PldNet::Init(c, 9);
  const PldNet d = PldNet::Init(c, 10);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    EXPECT_EQ(a.parameters()[i].name, b.parameters()[i].name);
    EXPECT_TRUE(a.parameters()[i].value.BitwiseEquals(b.parameters()[i].value));
    any_diff |= !a.parameters()[i].value.BitwiseEquals(d.parameters()[i].value);
  }
  EXPECT_TRUE(any_diff);
}

TEST(ModelInitTest, BiasesAndGlorotLimits) {
  const PldNetConfig c = PldNetConfig::Desk(4, 32, 32);
  const PldNet net = PldNet::Init(c, 3);
  for (const Parameter& p : net.parameters()) {
    if (p.name == "head.bias") {
      EXPECT_NEAR(1.0 / (1.0 + std::exp(-p.value[0])), c.output_prior, 1e-6);
    } else if (p.value.ndim() == 1) {
      EXPECT_EQ(p.value.Sum(), 0.0) << p.name;
    } else {
      const auto& s = p.value.shape();
      const double r = s[2] * s[3] * s[4];
      const double limit = std::sqrt(6.0 / (s[0] * r + s[1] * r));
      EXPECT_LE(std::max(-p.value.Min(), p.value.Max()), limit) << p.name;
      EXPECT_GT(p.value.Max(), 0.5 * limit) << p.name;
    }
  }
}

TEST(ModelForwardTest, ZeroParametersGiveOneHalf) {
  const PldNetConfig c = PldNetConfig::Toy();
  PldNet net = PldNet::Init(c, 0);
  for (Parameter& p : net.parameters()) p.value.Fill(0.0f);
  Rng rng(1);
  const DistinctionMap m = net.Infer(RandomTensor({1, 4, 8, 8}, rng, 0.0, 1.0));
  ASSERT_EQ(m.values.shape(), (std::vector<int>{8, 8}));
  for (float v : m.values.data()) EXPECT_EQ(v, 0.5f);
}

TEST(ModelForwardTest, ZeroWeightsGivePrior) {
  PldNetConfig c = PldNetConfig::Toy();
  c.output_prior = 0.3f;
  PldNet net = PldNet::Init(c, 0);
  for (Parameter& p : net.parameters()) {
    if (p.value.ndim() == 5) p.value.Fill(0.0f);
  }
  Rng rng(2);
  const DistinctionMap m = net.Infer(RandomTensor({1, 4, 8, 8}, rng));
  for (float v : m.values.data()) {
    EXPECT_NEAR(v, 0.3f, 1e-6);
  }
}

TEST(ModelForwardTest, ShapeContractOverRandomConfigs) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int l = 1 + static_cast<int>(rng.UniformInt(8));
    const int h = 4 * (1 + static_cast<int>(rng.UniformInt(4)));
    const int w = 4 * (1 + static_cast<int>(rng.UniformInt(4)));
    const int ch = rng.UniformInt(2) ? 3 : 1;
    const PldNetConfig c = PldNetConfig::Desk(l, h, w, ch);
    const PldNet net = PldNet::Init(c, trial);
    const DistinctionMap m = net.Infer(RandomTensor({ch, l, h, w}, rng, 0.0, 1.0));
    ASSERT_EQ(m.values.shape(), (std::vector<int>{h, w}));
    for (float v : m.values.data()) {
      EXPECT_GT(v, 0.0f);
      EXPECT_LT(v, 1.0f);
    }
    Tape tape;
    PldNet copy = net;
    const Var out = copy.Forward(tape, tape.Constant(RandomTensor({ch, l, h, w}, rng)));
    EXPECT_EQ(tape.value(out).shape(), (std::vector<int>{1, 1, h, w}));
  }
}

TEST(ModelForwardTest, RejectsWrongInputShape) {
  const PldNet net = PldNet::Init(PldNetConfig::Toy(), 0);
  EXPECT_THROW(net.Infer(Tensor({1, 3, 8, 8})), Error);
  EXPECT_THROW(net.Infer(Tensor({2, 4, 8, 8})), Error);
  EXPECT_THROW(net.Infer(Tensor({4, 8, 8})), Error);
}

TEST(ModelForwardTest, InferMatchesTapeForward) {
  const PldNet net = PldNet::Init(PldNetConfig::Toy(), 4);
  Rng rng(4);
  const Tensor clip = RandomTensor({1, 4, 8, 8}, rng, 0.0, 1.0);
  Tape tape;
  PldNet copy = net;
  const Tensor taped = tape.value(copy.Forward(tape, tape.Constant(clip)));
  const Tensor direct = net.Infer(clip).values;
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_FLOAT_EQ(direct[i], taped[i]);
}

TEST(ModelForwardTest, FramesAfterTargetDoNotMatter) {
  const PldNet net = PldNet::Init(PldNetConfig::Toy(), 6);
  Rng rng(6);
  VideoRecord shorter;
  shorter.id = "s";
  for (int k = 0; k < 6; ++k) shorter.frames.push_back(RandomTensor({8, 8}, rng, 0.0, 1.0));
  shorter.segments = {{0, 6}};
  shorter.labels = {1};
  VideoRecord longer = shorter;
  for (int k = 0; k < 4; ++k) longer.frames.push_back(RandomTensor({8, 8}, rng, 0.0, 1.0));
  longer.segments = {{0, 10}};
  for (int t = 0; t < 6; ++t) {
    EXPECT_TRUE(net.Infer(BuildClip(shorter, t, 4))
                    .values.BitwiseEquals(net.Infer(BuildClip(longer, t, 4)).values));
  }
}

TEST(ModelForwardTest, FromParametersChecksShapes) {
  const PldNetConfig c = PldNetConfig::Toy();
  std::vector<Parameter> params = PldNet::Init(c, 0).parameters();
  EXPECT_NO_THROW(PldNet::FromParameters(c, params));
  params[2].value = Tensor({1, 1, 1, 1, 1});
  EXPECT_THROW(PldNet::FromParameters(c, params), Error);
  params.pop_back();
  EXPECT_THROW(PldNet::FromParameters(c, params), Error);
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  TempDir dir;
  const PldNet net = PldNet::Init(PldNetConfig::Desk(4, 16, 16), 12);
  CheckpointMeta meta;
  meta.seed = 12;
  meta.epoch = 7;
  meta.temporal_mode = TemporalMode::kDuplicate;
  meta.label_mode = LabelMode::kBasic;
  SaveCheckpoint(net, meta, dir.path() / "ckpt");
  const Checkpoint loaded = LoadCheckpoint(dir.path() / "ckpt");
  EXPECT_TRUE(loaded.net.config() == net.config());
  EXPECT_EQ(loaded.meta.seed, 12u);
  EXPECT_EQ(loaded.meta.epoch, 7);
  EXPECT_EQ(loaded.meta.temporal_mode, TemporalMode::kDuplicate);
  EXPECT_EQ(loaded.meta.label_mode, LabelMode::kBasic);
  ASSERT_EQ(loaded.net.parameters().size(), net.parameters().size());
  for (std::size_t i = 0; i < net.parameters().size(); ++i) {
    EXPECT_EQ(loaded.net.parameters()[i].name, net.parameters()[i].name);
    EXPECT_TRUE(loaded.net.parameters()[i].value.BitwiseEquals(net.parameters()[i].value));
  }
  SaveCheckpoint(loaded.net, loaded.meta, dir.path() / "again");
  EXPECT_EQ(ReadFileBytes(dir.path() / "ckpt" / "checkpoint.json"),
            ReadFileBytes(dir.path() / "again" / "checkpoint.json"));
}

TEST(CheckpointTest, MalformedInputsFail) {
  TempDir dir;
  EXPECT_THROW(LoadCheckpoint(dir.path() / "missing"), Error);
  WriteFileBytes(dir.path() / "checkpoint.json", "{\"format\": \"other\", \"version\": 1}");
  EXPECT_THROW(LoadCheckpoint(dir.path()), Error);
  WriteFileBytes(dir.path() / "checkpoint.json", "{");
  try {
    LoadCheckpoint(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
  }
}

TEST(ModelGradCheckTest, ToyAndLinearPass) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    EXPECT_LT(ToyModelGradCheck(seed, 1e-3f).max_relative_error, 1e-2) << seed;
    EXPECT_LT(LinearModelGradCheck(seed, 1e-3f).max_relative_error, 1e-4) << seed;
  }
}

}  // namespace
}  // namespace pld
