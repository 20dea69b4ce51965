// Copyright 2026 The featcodec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace featcodec {
namespace {

// Codes equal to the flat index (mod 1024) make positions easy to trace.
QuantizedTensor indexed(TaskKind task, Shape shape) {
  QuantizedTensor q{task, expected_splits(task), shape, {}, 10, {}, ""};
  q.regions.assign(q.splits.size(), TruncationRegion{-1, 1});
  q.codes.resize(element_count(shape));
  for (std::size_t i = 0; i < q.codes.size(); ++i) q.codes[i] = static_cast<std::uint16_t>(i % 1024);
  return q;
}

TEST(Pack, CanonicalShapes) {
  struct Case { TaskKind task; Shape shape; std::uint32_t w, h; };
  const Case cases[] = {
      {TaskKind::Cls, {257, 1536}, 1536, 257},
      {TaskKind::CSR, {64, 4096}, 4096, 64},
      {TaskKind::Seg, {2, 1370, 1536}, 1536, 2740},
      {TaskKind::Dpt, {2, 4, 1611, 1536}, 6144, 3222},
      {TaskKind::TTI, {16, 128, 128}, 512, 512},
  };
  for (const auto& c : cases) {
    const auto l = pack_layout(c.task, c.shape);
    EXPECT_EQ(l.width(), c.w) << to_string(c.task);
    EXPECT_EQ(l.height(), c.h) << to_string(c.task);
  }
}

TEST(Pack, SegStacksPatchesVertically) {
  auto q = indexed(TaskKind::Seg, {2, 1370, 1536});
  auto p = pack(q);
  ASSERT_EQ(p.height, 2740u);
  // Patch 1, row 0, col 7 lands on plane row 1370.
  EXPECT_EQ(p.at(1370, 7), q.codes[(1ull * 1370 + 0) * 1536 + 7]);
  EXPECT_EQ(p.at(1369, 1535), q.codes[1369ull * 1536 + 1535]);
}

TEST(Pack, DptLayersSideBySideOriginalOnTop) {
  auto q = indexed(TaskKind::Dpt, {2, 4, 1611, 1536});
  auto p = pack(q);
  ASSERT_EQ(p.width, 6144u);
  ASSERT_EQ(p.height, 3222u);
  auto elem = [&](std::size_t img, std::size_t layer, std::size_t r, std::size_t c) {
    return q.codes[((img * 4 + layer) * 1611 + r) * 1536 + c];
  };
  EXPECT_EQ(p.at(0, 1536), elem(0, 1, 0, 0));  // SP_DM2 starts at column 1536
  EXPECT_EQ(p.at(0, 3 * 1536 + 5), elem(0, 3, 0, 5));
  EXPECT_EQ(p.at(1611, 0), elem(1, 0, 0, 0));  // flipped image below
  EXPECT_EQ(p.at(3221, 6143), elem(1, 3, 1610, 1535));
}

TEST(Pack, TtiChannelGroups) {
  auto q = indexed(TaskKind::TTI, {16, 128, 128});
  // Make channel 4 distinguishable from the modular index pattern.
  for (std::size_t i = 4 * 128 * 128; i < 5 * 128 * 128; ++i) q.codes[i] = 1000;
  auto p = pack(q);
  ASSERT_EQ(p.width, 512u);
  ASSERT_EQ(p.height, 512u);
  EXPECT_EQ(p.at(128, 0), 1000);  // channel 4 opens the second subgroup
  EXPECT_EQ(p.at(0, 128), q.codes[1 * 128 * 128]);
  EXPECT_EQ(p.at(511, 511), q.codes[15ull * 128 * 128 + 127 * 128 + 127]);
  auto back = unpack(p);
  EXPECT_EQ(back.shape, (Shape{16, 128, 128}));
  EXPECT_EQ(back, q);
}

TEST(Pack, IdentityForClsAndCsr) {
  auto q = indexed(TaskKind::Cls, {257, 1536});
  EXPECT_EQ(pack(q).samples, q.codes);
  auto c = indexed(TaskKind::CSR, {3, 4096});
  EXPECT_EQ(pack(c).samples, c.codes);
}

TEST(Unpack, DimensionMismatch) {
  auto p = pack(indexed(TaskKind::TTI, {16, 128, 128}));
  p.width = 500;
  p.samples.resize(512 * 500);
  EXPECT_THROW(unpack(p), ValidationError);
}

TEST(Pack, RejectsShapeOutsideFamily) {
  auto q = indexed(TaskKind::Dpt, {2, 4, 3, 3});
  q.shape = {2, 3, 4, 3};
  EXPECT_THROW(pack(q), ValidationError);
}

// Exhaustive permutation check on small instances of every family: each
// plane sample comes from exactly one tensor element and unpack inverts pack.
TEST(Pack, BijectiveOnSmallInstances) {
  for (auto task : kAllTasks) {
    for (std::uint32_t a = 1; a <= 4; ++a)
      for (std::uint32_t b = 1; b <= 5; ++b) {
        Shape shape;
        switch (task) {
          case TaskKind::Cls:
          case TaskKind::CSR: shape = {a, b}; break;
          case TaskKind::Seg: shape = {a, b, a + 1}; break;
          case TaskKind::Dpt: shape = {2, 4, a, b}; break;
          case TaskKind::TTI: shape = {4 * a, b, 3}; break;
        }
        auto q = indexed(task, shape);
        for (std::size_t i = 0; i < q.codes.size(); ++i) q.codes[i] = static_cast<std::uint16_t>(i);
        auto p = pack(q);
        ASSERT_EQ(std::size_t(p.width) * p.height, q.codes.size());
        std::vector<int> hits(q.codes.size(), 0);
        for (auto s : p.samples) hits.at(s)++;
        for (int h : hits) ASSERT_EQ(h, 1) << to_string(task) << " " << shape_to_string(shape);
        ASSERT_EQ(unpack(p), q);
      }
  }
}

TEST(Pack, RandomizedFullSizeRoundTrip) {
  std::mt19937_64 rng(41);
  for (auto task : kAllTasks) {
    Shape shape = task == TaskKind::CSR ? Shape{64, 4096} : synth_shape(task);
    auto q = testing::random_quantized(task, shape, rng);
    ASSERT_EQ(unpack(pack(q)), q) << to_string(task);
  }
}

}  // namespace
}  // namespace featcodec
