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

FeatureTensor with_values(TaskKind task, Shape shape, std::vector<float> values) {
  return {task, expected_splits(task), std::move(shape), std::move(values), ""};
}

TEST(Truncate, ClampsClsOutlier) {
  auto t = with_values(TaskKind::Cls, {1, 3}, {-552.45f, 3.0f, 104.18f});
  auto out = truncate(t, TruncationTable::vtm());
  EXPECT_EQ(out.data, (std::vector<float>{-20.0f, 3.0f, 20.0f}));
  EXPECT_EQ(out.shape, t.shape);
  EXPECT_EQ(out.splits, t.splits);
}

TEST(Truncate, DptUsesPerLayerRegions) {
  // One element per (image, layer); layer order DM1..DM4.
  auto t = with_values(TaskKind::Dpt, {2, 4, 1, 1}, {-26.89f, -26.89f, -26.89f, -26.89f, 5.0f, 5.0f, 5.0f, 5.0f});
  auto out = truncate(t, TruncationTable::vtm());
  EXPECT_EQ(out.data, (std::vector<float>{-1, -2, -10, -20, 1, 2, 5, 5}));
}

TEST(Truncate, MissingEntryIsAnError) {
  TruncationTable table;
  table.set(TaskKind::Cls, SplitPoint::DS, {-1, 1});
  auto t = with_values(TaskKind::CSR, {1, 1}, {0});
  EXPECT_THROW(truncate(t, table), ValidationError);
}

TEST(Truncate, Idempotent) {
  std::mt19937_64 rng(5);
  for (auto task : kAllTasks) {
    auto t = testing::random_feature(task, testing::random_shape(task, rng), rng, -50, 50);
    auto once = truncate(t, TruncationTable::vtm());
    auto twice = truncate(once, TruncationTable::vtm());
    EXPECT_TRUE(testing::bitwise_equal(once.data, twice.data));
  }
}

TEST(Quantize, EndpointsAndMidpoint) {
  const TruncationRegion r{-20, 20};
  EXPECT_EQ(quantize_value(-20, r, 10), 0);
  EXPECT_EQ(quantize_value(20, r, 10), 1023);
  EXPECT_EQ(quantize_value(0, r, 10), 512);  // 511.5 rounds away from zero
  EXPECT_EQ(quantize_value(-1000, r, 10), 0);
  EXPECT_EQ(quantize_value(1000, r, 10), 1023);
  EXPECT_EQ(quantize_value(static_cast<float>(1.0 / 1023.0), {0, 1}, 10), 1);
}

TEST(Quantize, BitsOutOfRange) {
  auto t = with_values(TaskKind::Cls, {1, 1}, {0});
  EXPECT_THROW(quantize_uniform(t, TruncationTable::vtm(), 7), ValidationError);
  EXPECT_THROW(quantize_uniform(t, TruncationTable::vtm(), 17), ValidationError);
  EXPECT_NO_THROW(quantize_uniform(t, TruncationTable::vtm(), 16));
}

TEST(Dequantize, EndpointsAndCode512) {
  const TruncationRegion r{-20, 20};
  EXPECT_DOUBLE_EQ(dequantize_value(0, r, 10), -20);
  EXPECT_DOUBLE_EQ(dequantize_value(1023, r, 10), 20);
  // 40 * 512 / 1023 - 20
  EXPECT_NEAR(dequantize_value(512, r, 10), 0.019550342130987, 1e-12);
}

TEST(Quantize, HalfStepErrorBoundProperty) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lo_d(-100, 10);
  std::uniform_real_distribution<double> w_d(0.01, 200);
  std::uniform_int_distribution<int> bits_d(8, 16);
  for (int iter = 0; iter < 200; ++iter) {
    const double lo = lo_d(rng);
    const TruncationRegion r{lo, lo + w_d(rng)};
    const int bits = bits_d(rng);
    auto t = testing::random_feature(TaskKind::Cls, {8, 16}, rng, r.lo, r.hi);
    TruncationTable table;
    table.set(TaskKind::Cls, SplitPoint::DS, r);
    auto back = dequantize(quantize_uniform(t, table, bits));
    // float storage of the reconstruction adds at most one float ulp.
    const double bound = half_step(r, bits) * (1 + 1e-9) + 4 * std::numeric_limits<float>::epsilon() * std::max(std::abs(r.lo), std::abs(r.hi));
    for (std::size_t i = 0; i < t.data.size(); ++i) ASSERT_LE(std::abs(double(back.data[i]) - t.data[i]), bound);
  }
}

TEST(Quantize, MonotoneInValue) {
  const TruncationRegion r{-4.09, 3.05};
  std::uint16_t prev = 0;
  for (double x = -5; x <= 4; x += 0.0007) {
    auto c = quantize_value(x, r, 10);
    ASSERT_GE(c, prev) << x;
    prev = c;
  }
}

TEST(Quantize, WideningRegionScalesHalfStep) {
  // [-5, 5] -> [-30, 30]: six times the region width, six times the error bound.
  EXPECT_DOUBLE_EQ(half_step({-30, 30}, 10) / half_step({-5, 5}, 10), 6.0);
  EXPECT_GT(half_step({-30, 30}, 10), half_step({-5, 5}, 10));
  EXPECT_DOUBLE_EQ(half_step({-20, 20}, 10), 40.0 / 2046.0);
}

TEST(Quantize, EmpiricalRegionLosesNothingToClamping) {
  std::mt19937_64 rng(23);
  auto t = testing::random_feature(TaskKind::Dpt, {2, 4, 3, 5}, rng, -300, 80);
  auto regions = empirical_regions(t);
  ASSERT_EQ(regions.size(), 4u);
  auto q = quantize_uniform(t, regions, 10);
  auto back = dequantize(q);
  SubTensorIndex idx(t.task, t.shape);
  for (std::size_t i = 0; i < t.data.size(); ++i)
    EXPECT_LE(std::abs(double(back.data[i]) - t.data[i]), half_step(regions[idx(i)], 10) * 1.0001);
}

TEST(Quantize, ConstantTensorEmpiricalRegion) {
  auto t = with_values(TaskKind::Cls, {2, 2}, {3, 3, 3, 3});
  auto q = quantize_uniform(t, empirical_regions(t), 10);
  for (auto c : q.codes) EXPECT_EQ(c, 0);
  auto back = dequantize(q);
  for (float v : back.data) EXPECT_EQ(v, 3.0f);
}

TEST(Normalize, EndpointsAndInverse) {
  TruncationTable table;
  table.set(TaskKind::CSR, SplitPoint::G, {-5, 5});
  auto t = with_values(TaskKind::CSR, {1, 3}, {-5, 0, 5});
  auto n = normalize(t, table);
  EXPECT_EQ(n.data, (std::vector<float>{0.0f, 0.5f, 1.0f}));

  std::mt19937_64 rng(29);
  auto r = testing::random_feature(TaskKind::CSR, {16, 16}, rng, -5, 5);
  auto back = denormalize(normalize(r, table), table);
  for (std::size_t i = 0; i < r.data.size(); ++i)
    EXPECT_LE(std::abs(back.data[i] - r.data[i]), 1e-6 * std::max(1.0f, std::abs(r.data[i])));
}

TEST(TruncationTable, DefaultsAndJson) {
  const auto vtm = TruncationTable::vtm();
  for (auto task : kAllTasks) EXPECT_TRUE(vtm.covers(task));
  EXPECT_EQ(vtm.at(TaskKind::TTI, SplitPoint::H), (TruncationRegion{-4.09, 3.05}));
  EXPECT_EQ(vtm.at(TaskKind::Dpt, SplitPoint::DM3), (TruncationRegion{-10, 10}));
  const auto hp = TruncationTable::hyperprior();
  EXPECT_EQ(hp.at(TaskKind::Cls, SplitPoint::DS), (TruncationRegion{-5, 5}));
  EXPECT_EQ(hp.at(TaskKind::Dpt, SplitPoint::DM4), (TruncationRegion{-10, 10}));
  EXPECT_EQ(hp.at(TaskKind::Dpt, SplitPoint::DM2), (TruncationRegion{-2, 2}));

  auto round = TruncationTable::from_json(vtm.to_json());
  EXPECT_EQ(round.entries(), vtm.entries());
  EXPECT_THROW(TruncationTable::from_json(nlohmann::json::parse(R"({"cls": {"SP_DS": [5, -5]}})")), ValidationError);
  EXPECT_THROW(TruncationTable::from_json(nlohmann::json::parse(R"({"xyz": {}})")), ValidationError);
}

TEST(TruncationTable, ShippedConfigFilesMatchDefaults) {
  const auto dir = std::filesystem::path(FEATCODEC_CONFIG_DIR);
  EXPECT_EQ(load_truncation_table(dir / "truncation_vtm.json").entries(), TruncationTable::vtm().entries());
  EXPECT_EQ(load_truncation_table(dir / "truncation_hyperprior.json").entries(), TruncationTable::hyperprior().entries());
  EXPECT_EQ(Config::load(dir / "default.json").truncation.entries(), TruncationTable::vtm().entries());
  auto narrow = load_truncation_table(dir / "truncation_ablation_narrow.json");
  EXPECT_EQ(narrow.at(TaskKind::Cls, SplitPoint::DS), (TruncationRegion{-5, 5}));
  EXPECT_EQ(narrow.at(TaskKind::CSR, SplitPoint::G), (TruncationRegion{-2, 2}));
  auto wide = load_truncation_table(dir / "truncation_ablation_wide.json");
  EXPECT_EQ(wide.at(TaskKind::Dpt, SplitPoint::DM4), (TruncationRegion{-30, 30}));
  EXPECT_EQ(wide.at(TaskKind::Dpt, SplitPoint::DM1), (TruncationRegion{-1, 1}));
}

}  // namespace
}  // namespace featcodec
