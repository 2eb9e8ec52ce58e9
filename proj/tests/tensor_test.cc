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
#include <limits>
#include <optional>
#include <set>

#include <gtest/gtest.h>

#include "pld/error.h"
#include "pld/rng.h"
#include "pld/tensor.h"
#include "test_util.h"

namespace pld {
namespace {

using testing::RandomTensor;
using testing::TempDir;

TEST(TensorTest, ShapeAndFill) {
  Tensor t({2, 3, 4}, 1.5f);
  EXPECT_EQ(t.ndim(), 3);
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.dim(-1), 4);
  EXPECT_EQ(t.dim(0), 2);
  EXPECT_DOUBLE_EQ(t.Sum(), 36.0);
  EXPECT_FLOAT_EQ(t.Max(), 1.5f);
  t.Fill(-2.0f);
  EXPECT_FLOAT_EQ(t.Min(), -2.0f);
}

TEST(TensorTest, RejectsBadShapes) {
  EXPECT_THROW(Tensor(std::vector<int>{}), Error);
  EXPECT_THROW(Tensor({2, 0}), Error);
  EXPECT_THROW(Tensor({-1}), Error);
  EXPECT_THROW(Tensor({2, 2}, std::vector<float>{1, 2, 3}), Error);
  try {
    Tensor({2, 2}, std::vector<float>{1, 2, 3});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
}

TEST(TensorTest, DimOutOfRange) {
  Tensor t({2, 3});
  EXPECT_THROW(t.dim(2), Error);
  EXPECT_THROW(t.dim(-3), Error);
}

TEST(TensorTest, ReshapeKeepsData) {
  Tensor t({2, 3}, std::vector<float>{1, 2, 3, 4, 5, 6});
  Tensor r = t.Reshaped({3, 2});
  EXPECT_EQ(r.shape(), (std::vector<int>{3, 2}));
  EXPECT_FLOAT_EQ(r[5], 6.0f);
  EXPECT_THROW(t.Reshaped({4, 2}), Error);
}

TEST(TensorTest, FiniteAndBitwise) {
  Tensor t({3}, 0.0f);
  EXPECT_TRUE(t.AllFinite());
  t[1] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_FALSE(t.AllFinite());
  Tensor a({2}, 0.0f), b({2}, -0.0f);
  EXPECT_FALSE(a.BitwiseEquals(b));
  EXPECT_TRUE(a.BitwiseEquals(Tensor({2}, 0.0f)));
  EXPECT_FALSE(a.BitwiseEquals(Tensor({1, 2}, 0.0f)));
}

TEST(PldtTest, EncodesHeaderLittleEndian) {
  Tensor t({1, 2}, std::vector<float>{1.0f, -2.0f});
  const std::string bytes = EncodePldt(t);
  ASSERT_EQ(bytes.size(), 4u + 4u + 4u + 2u * 4u + 2u * 4u);
  EXPECT_EQ(bytes.substr(0, 4), "PLDT");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1u);  // version
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2u);  // ndim
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 2u);  // second dim
  // 1.0f = 0x3f800000 little-endian.
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 0x00);
  EXPECT_EQ(static_cast<unsigned char>(bytes[23]), 0x3f);
}

TEST(PldtTest, RoundTripIsBitwise) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> shape;
    const int nd = 1 + static_cast<int>(rng.UniformInt(4));
    for (int d = 0; d < nd; ++d) shape.push_back(1 + static_cast<int>(rng.UniformInt(5)));
    const Tensor t = RandomTensor(shape, rng, -1e3, 1e3);
    EXPECT_TRUE(DecodePldt(EncodePldt(t)).BitwiseEquals(t));
  }
}

TEST(PldtTest, FileRoundTrip) {
  TempDir dir;
  Rng rng(3);
  const Tensor t = RandomTensor({3, 4, 5}, rng);
  WritePldt(dir.path() / "t.pldt", t);
  EXPECT_TRUE(ReadPldt(dir.path() / "t.pldt").BitwiseEquals(t));
}

TEST(PldtTest, RejectsMalformedInput) {
  const std::string good = EncodePldt(Tensor({2}, 1.0f));
  auto code_of = [](std::string_view bytes) -> std::optional<ErrorCode> {
    try {
      DecodePldt(bytes);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(code_of(bad_magic), ErrorCode::kFormat);
  std::string bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(code_of(bad_version), ErrorCode::kFormat);
  EXPECT_EQ(code_of(good.substr(0, good.size() - 1)), ErrorCode::kFormat);
  EXPECT_EQ(code_of(good + "x"), ErrorCode::kFormat);
  EXPECT_EQ(code_of("PL"), ErrorCode::kFormat);
  std::string zero_dim = good;
  zero_dim[12] = 0;
  EXPECT_EQ(code_of(zero_dim), ErrorCode::kFormat);
}

TEST(PldtTest, MissingFileIsIoError) {
  try {
    ReadPldt("/nonexistent/dir/x.pldt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(RngTest, DeterministicAndInRange) {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.Uniform();
    EXPECT_EQ(u, b.Uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.UniformInt(7), 7u);
    b.UniformInt(7);
  }
}

TEST(RngTest, UniformIntCoversRange) {
  Rng rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 500; ++i) seen.insert(rng.UniformInt(5));
  EXPECT_EQ(seen.size(), 5u);
}

TEST(RngTest, NormalMoments) {
  Rng rng(1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.Normal();
    sum += x;
    sum2 += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sum2 / n, 1.0, 0.05);
}

TEST(RngTest, ShuffleIsPermutation) {
  Rng rng(2);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.Shuffle(v);
  std::multiset<int> s(v.begin(), v.end());
  EXPECT_EQ(s.size(), 50u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(s.count(i), 1u);
}

TEST(RngTest, DeriveSeedSeparatesStreams) {
  EXPECT_EQ(DeriveSeed(1, "a"), DeriveSeed(1, "a"));
  EXPECT_NE(DeriveSeed(1, "a"), DeriveSeed(1, "b"));
  EXPECT_NE(DeriveSeed(1, "a"), DeriveSeed(2, "a"));
  EXPECT_NE(DeriveSeed(1, "a", 0), DeriveSeed(1, "a", 1));
}

}  // namespace
}  // namespace pld
