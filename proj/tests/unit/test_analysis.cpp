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

FeatureTensor cls(std::uint32_t rows, std::uint32_t cols, std::vector<float> data) {
  return {TaskKind::Cls, expected_splits(TaskKind::Cls), {rows, cols}, std::move(data), "t"};
}

FeatureTensor uniform_cls(std::uint32_t rows, std::uint32_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(-3, 7);
  std::vector<float> v(std::size_t(rows) * cols);
  for (auto& x : v) x = d(rng);
  return cls(rows, cols, std::move(v));
}

// Direct 2-D correlation with explicit 3x3 kernels.
double oracle_gm(const std::vector<double>& img, int w, int h) {
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  double sum = 0;
  for (int r = 1; r < h - 1; ++r)
    for (int c = 1; c < w - 1; ++c) {
      double gx = 0, gy = 0;
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
          gx += kx[i + 1][j + 1] * img[(r + i) * w + c + j];
          gy += ky[i + 1][j + 1] * img[(r + i) * w + c + j];
        }
      sum += std::hypot(gx, gy);
    }
  return sum / ((w - 2) * (h - 2)) * 1e5;
}

TEST(BasicStats, MinMaxMean) {
  auto s = basic_stats(cls(1, 4, {-2, 0, 1, 5}));
  EXPECT_EQ(s.min, -2);
  EXPECT_EQ(s.max, 5);
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_THROW(basic_stats(cls(0, 0, {})), ValidationError);
}

TEST(IntensityVariance, Oracles) {
  EXPECT_DOUBLE_EQ(intensity_variance(cls(4, 4, std::vector<float>(16, 3.5f))), 0.0);
  std::vector<float> alt(64);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 9.0f : -1.0f;
  EXPECT_DOUBLE_EQ(intensity_variance(cls(8, 8, alt)), 261632.25);
  const double iv = intensity_variance(uniform_cls(200, 500, 1));
  EXPECT_NEAR(iv, 1024.0 * 1024.0 / 12.0, 0.05 * 1024.0 * 1024.0 / 12.0);
}

TEST(IntensityVariance, ShiftInvariantWithShiftedRegion) {
  auto t = uniform_cls(30, 40, 2);
  auto s = t;
  for (auto& v : s.data) v += 4.0f;
  const TruncationRegion r{-3, 7}, rs{1, 11};
  EXPECT_NEAR(intensity_variance(t, r), intensity_variance(s, rs), 1e-6 * intensity_variance(t, r) + 2.0);
  EXPECT_NEAR(gradient_magnitude(t, r), gradient_magnitude(s, rs), 0.01 * gradient_magnitude(t, r));
}

TEST(GradientMagnitude, ConstantIsZero) {
  EXPECT_DOUBLE_EQ(gradient_magnitude(cls(6, 9, std::vector<float>(54, -2.0f))), 0.0);
}

TEST(GradientMagnitude, StepEdgeMatchesBruteForce) {
  std::vector<float> v(25);
  std::vector<double> unit(25);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      v[r * 5 + c] = c >= 2 ? 1.0f : 0.0f;
      unit[r * 5 + c] = c >= 2 ? 1.0 : 0.0;
    }
  const double gm = gradient_magnitude(cls(5, 5, v));
  EXPECT_NEAR(gm, oracle_gm(unit, 5, 5), 1e-6);
  EXPECT_NEAR(gm, 24.0 / 9.0 * 1e5, 1e-6);
}

TEST(GradientMagnitude, RandomPlaneMatchesBruteForce) {
  auto t = uniform_cls(17, 23, 3);
  const auto q = analysis_codes(t, std::nullopt);
  std::vector<double> unit(q.codes.size());
  for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = q.codes[i] / 1023.0;
  EXPECT_NEAR(gradient_magnitude(t), oracle_gm(unit, 23, 17), 1e-6);
}

TEST(GradientMagnitude, HorizontalRampHasNoVerticalGradient) {
  // Column ramp: Gy = 0 everywhere, Gx constant = 8 * step.
  std::vector<float> v(10 * 12);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 12; ++c) v[r * 12 + c] = float(c);
  const double gm = gradient_magnitude(cls(10, 12, v));
  const auto q = analysis_codes(cls(10, 12, v), std::nullopt);
  double expect = 0;
  for (int r = 1; r < 9; ++r)
    for (int c = 1; c < 11; ++c) {
      auto at = [&](int rr, int cc) { return q.codes[rr * 12 + cc] / 1023.0; };
      const double gx = at(r - 1, c + 1) + 2 * at(r, c + 1) + at(r + 1, c + 1) - at(r - 1, c - 1) - 2 * at(r, c - 1) -
                        at(r + 1, c - 1);
      expect += std::abs(gx);
    }
  EXPECT_NEAR(gm, expect / 80 * 1e5, 1e-6);
}

TEST(GradientMagnitude, TooSmall) {
  EXPECT_THROW(gradient_magnitude(cls(2, 10, std::vector<float>(20, 0))), ValidationError);
}

TEST(Histogram, ConstantAndUniform) {
  auto h = histogram_cdf(cls(3, 3, std::vector<float>(9, 2.0f)), 16);
  ASSERT_EQ(h.counts.size(), 1u);
  EXPECT_EQ(h.counts[0], 9u);
  EXPECT_EQ(h.cdf.back(), 1.0);

  auto t = uniform_cls(200, 500, 4);
  auto u = histogram_cdf(t, 10);
  ASSERT_EQ(u.counts.size(), 10u);
  ASSERT_EQ(u.edges.size(), 11u);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    total += u.counts[i];
    EXPECT_NEAR(double(u.counts[i]) / t.data.size(), 0.1, 0.005);
    if (i) {
      EXPECT_GE(u.cdf[i], u.cdf[i - 1]);
    }
  }
  EXPECT_EQ(total, t.data.size());
  EXPECT_EQ(u.cdf.back(), 1.0);
  const auto s = basic_stats(t);
  EXPECT_EQ(u.edges.front(), s.min);
  EXPECT_EQ(u.edges.back(), s.max);
}

TEST(Histogram, MaxLandsInLastBin) {
  auto h = histogram_cdf(cls(1, 4, {0, 1, 2, 4}), 4);
  EXPECT_EQ(h.counts, (std::vector<std::uint64_t>{1, 1, 1, 1}));
  EXPECT_THROW(histogram_cdf(cls(1, 4, {0, 1, 2, 4}), 1), ValidationError);
}

TEST(DctEnergy, ConstantWithoutMeanRemoval) {
  DctEnergyOptions o;
  o.remove_mean = false;
  o.region = TruncationRegion{0, 10};
  auto m = dct_energy_map(cls(32, 48, std::vector<float>(32 * 48, 5.0f)), o);
  EXPECT_EQ(m.blocks_x, 3u);
  EXPECT_EQ(m.blocks_y, 2u);
  EXPECT_EQ(m.blocks.size(), 6u);
  EXPECT_NEAR(m.dc_fraction, 1.0, 1e-12);
  EXPECT_NEAR(m.first_col_fraction, 1.0, 1e-12);
  EXPECT_NEAR(m.first_row_fraction, 1.0, 1e-12);
}

TEST(DctEnergy, IdenticalRowsConcentrateInFirstRow) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> d(-1, 1);
  std::vector<float> row(64), v(64 * 48);
  for (auto& x : row) x = d(rng);
  for (int r = 0; r < 48; ++r) std::copy(row.begin(), row.end(), v.begin() + r * 64);
  auto m = dct_energy_map(cls(48, 64, v));
  EXPECT_NEAR(m.first_row_fraction, 1.0, 1e-9);
  EXPECT_LT(m.first_col_fraction, 0.2);
}

TEST(DctEnergy, NoiseSpreadsAndParseval) {
  auto m = dct_energy_map(uniform_cls(64, 64, 6));
  EXPECT_LT(m.dc_fraction, 0.05);
  EXPECT_NEAR(m.total_energy, m.spatial_energy, 1e-6 * m.spatial_energy);
  DctEnergyOptions o;
  o.remove_mean = false;
  auto raw = dct_energy_map(uniform_cls(64, 64, 6), o);
  EXPECT_NEAR(raw.total_energy, raw.spatial_energy, 1e-6 * raw.spatial_energy);
  EXPECT_GT(raw.dc_fraction, 0.5);
}

TEST(DctEnergy, PartialTilesSkippedAndErrors) {
  auto m = dct_energy_map(uniform_cls(40, 50, 7));
  EXPECT_EQ(m.blocks_x, 3u);
  EXPECT_EQ(m.blocks_y, 2u);
  EXPECT_THROW(dct_energy_map(uniform_cls(10, 50, 7)), ValidationError);
  DctEnergyOptions o;
  o.block = 0;
  EXPECT_THROW(dct_energy_map(uniform_cls(40, 50, 7), o), ValidationError);
}

TEST(Analyze, ReportInvariantsAndJson) {
  auto t = synth_feature(TaskKind::Dpt, SynthModel::Smooth, 1, 16);
  auto rep = analyze(t, 64, 16);
  EXPECT_LE(rep.stats.min, rep.stats.mean);
  EXPECT_LE(rep.stats.mean, rep.stats.max);
  std::uint64_t total = 0;
  for (auto c : rep.histogram.counts) total += c;
  EXPECT_EQ(total, t.data.size());
  EXPECT_TRUE(std::is_sorted(rep.histogram.cdf.begin(), rep.histogram.cdf.end()));
  ASSERT_TRUE(rep.dct);
  auto j = to_json(rep);
  for (const char* k : {"min", "max", "mean", "iv", "gm", "histogram", "dct_energy"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["histogram"]["display_hint"], "log-frequency");
  EXPECT_FALSE(analyze(t, 8).dct);
}

}  // namespace
}  // namespace featcodec
