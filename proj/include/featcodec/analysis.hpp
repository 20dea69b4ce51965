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

#pragma once

// Dataset statistics for feature tensors: extrema and mean, intensity
// variance and Sobel gradient magnitude of the 10-bit codes, histograms with
// CDF, and block-DCT energy maps of the packed plane.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "featcodec/dct.hpp"
#include "featcodec/errors.hpp"
#include "featcodec/feature_io.hpp"
#include "featcodec/packing.hpp"
#include "featcodec/preprocess.hpp"
#include "json.hpp"

namespace featcodec {

inline constexpr int kAnalysisBits = 10;
inline constexpr double kGradientScale = 1e5;

struct BasicStats {
  double min = 0;
  double max = 0;
  double mean = 0;
};

inline BasicStats basic_stats(const FeatureTensor& t) {
  if (t.data.empty()) throw ValidationError("basic_stats: empty tensor");
  BasicStats s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
  double sum = 0;
  for (float v : t.data) {
    s.min = std::min(s.min, double(v));
    s.max = std::max(s.max, double(v));
    sum += v;
  }
  s.mean = sum / double(t.data.size());
  return s;
}

// Single region over the whole tensor; the empirical [min, max] unless one is
// given.
inline TruncationRegion analysis_region(const FeatureTensor& t, std::optional<TruncationRegion> region) {
  if (region) {
    check_region(*region);
    return *region;
  }
  const auto s = basic_stats(t);
  return {s.min, s.max > s.min ? s.max : s.min + 1.0};
}

inline QuantizedTensor analysis_codes(const FeatureTensor& t, std::optional<TruncationRegion> region) {
  if (t.data.empty()) throw ValidationError("analysis: empty tensor");
  const auto r = analysis_region(t, region);
  std::vector<TruncationRegion> regions(SubTensorIndex(t.task, t.shape).count(), r);
  return quantize_uniform(t, regions, kAnalysisBits);
}

// Population variance of the 10-bit codes.
inline double intensity_variance(const FeatureTensor& t, std::optional<TruncationRegion> region = std::nullopt) {
  const auto q = analysis_codes(t, region);
  double mean = 0;
  for (auto c : q.codes) mean += c;
  mean /= double(q.codes.size());
  double var = 0;
  for (auto c : q.codes) var += (c - mean) * (c - mean);
  return var / double(q.codes.size());
}

// Mean Sobel magnitude over interior pixels of a row-major plane.
inline double sobel_mean_magnitude(std::span<const double> plane, std::uint32_t width, std::uint32_t height) {
  if (width < 3 || height < 3) throw ValidationError("gradient magnitude needs a plane of at least 3x3");
  if (plane.size() != std::size_t(width) * height) throw ValidationError("plane size mismatch");
  auto px = [&](std::uint32_t r, std::uint32_t c) { return plane[std::size_t(r) * width + c]; };
  double sum = 0;
  for (std::uint32_t r = 1; r + 1 < height; ++r)
    for (std::uint32_t c = 1; c + 1 < width; ++c) {
      const double gx = (px(r - 1, c + 1) + 2 * px(r, c + 1) + px(r + 1, c + 1)) -
                        (px(r - 1, c - 1) + 2 * px(r, c - 1) + px(r + 1, c - 1));
      const double gy = (px(r + 1, c - 1) + 2 * px(r + 1, c) + px(r + 1, c + 1)) -
                        (px(r - 1, c - 1) + 2 * px(r - 1, c) + px(r - 1, c + 1));
      sum += std::sqrt(gx * gx + gy * gy);
    }
  return sum / (double(width - 2) * double(height - 2));
}

// Codes of the packed plane scaled to [0, 1], Sobel on the interior, mean
// magnitude reported x 1e5.
inline double gradient_magnitude(const FeatureTensor& t, std::optional<TruncationRegion> region = std::nullopt) {
  const auto plane = pack(analysis_codes(t, region));
  if (plane.width < 3 || plane.height < 3) throw ValidationError("gradient magnitude needs a packed plane of at least 3x3");
  std::vector<double> unit(plane.samples.size());
  const double max = double((1u << kAnalysisBits) - 1u);
  for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = plane.samples[i] / max;
  return sobel_mean_magnitude(unit, plane.width, plane.height) * kGradientScale;
}

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1 entries
  std::vector<std::uint64_t> counts;
  std::vector<double> cdf;
  std::string display_hint = "log-frequency";
};

// Equal-width bins over the empirical [min, max]; the last bin is closed.
// A constant tensor produces a single bin.
inline Histogram histogram_cdf(const FeatureTensor& t, int nbins) {
  if (nbins < 2) throw ValidationError("histogram needs at least 2 bins");
  const auto s = basic_stats(t);
  Histogram h;
  if (s.max == s.min) {
    h.edges = {s.min, s.max};
    h.counts = {t.data.size()};
  } else {
    h.edges.resize(std::size_t(nbins) + 1);
    for (int i = 0; i <= nbins; ++i) h.edges[i] = s.min + (s.max - s.min) * i / nbins;
    h.edges.back() = s.max;
    h.counts.assign(nbins, 0);
    const double scale = nbins / (s.max - s.min);
    for (float v : t.data) {
      auto b = static_cast<std::int64_t>((double(v) - s.min) * scale);
      h.counts[std::clamp<std::int64_t>(b, 0, nbins - 1)]++;
    }
  }
  h.cdf.resize(h.counts.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    acc += h.counts[i];
    h.cdf[i] = double(acc) / double(t.data.size());
  }
  h.cdf.back() = 1.0;
  return h;
}

struct DctEnergyOptions {
  int block = 16;
  bool remove_mean = true;
  bool keep_blocks = true;
  std::optional<TruncationRegion> region;
};

struct DctEnergyMap {
  int block = 16;
  std::uint32_t blocks_x = 0;
  std::uint32_t blocks_y = 0;
  std::vector<std::vector<double>> blocks;  // |coefficient| grids, raster block order
  std::vector<double> mean_abs;             // block-averaged |coefficient| grid
  double total_energy = 0;
  double spatial_energy = 0;  // sum of squared samples fed to the DCT
  // Shares of total squared coefficient magnitude. first_row is the zero
  // vertical-frequency line (energy of row-repeated content), first_col the
  // zero horizontal-frequency line; both include DC.
  double dc_fraction = 0;
  double first_row_fraction = 0;
  double first_col_fraction = 0;
};

// Tiles the packed 10-bit code plane into full block x block tiles (partial
// edge tiles are skipped) and transforms each one.
inline DctEnergyMap dct_energy_map(const FeatureTensor& t, const DctEnergyOptions& opt = {}) {
  if (opt.block < 1) throw ValidationError("DCT block size must be positive");
  const auto plane = pack(analysis_codes(t, opt.region));
  const auto n = static_cast<std::uint32_t>(opt.block);
  if (plane.width < n || plane.height < n)
    throw ValidationError("DCT block " + std::to_string(n) + " larger than packed plane " + std::to_string(plane.width) +
                          "x" + std::to_string(plane.height));
  DctEnergyMap m;
  m.block = opt.block;
  m.blocks_x = plane.width / n;
  m.blocks_y = plane.height / n;
  const std::size_t nn = std::size_t(n) * n;
  m.mean_abs.assign(nn, 0.0);
  Dct2d dct(opt.block);
  std::vector<double> tile(nn), coef(nn);
  double dc = 0, row0 = 0, col0 = 0;
  for (std::uint32_t by = 0; by < m.blocks_y; ++by)
    for (std::uint32_t bx = 0; bx < m.blocks_x; ++bx) {
      double mean = 0;
      for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c) mean += tile[r * n + c] = plane.at(by * n + r, bx * n + c);
      mean /= double(nn);
      if (opt.remove_mean)
        for (auto& v : tile) v -= mean;
      for (double v : tile) m.spatial_energy += v * v;
      dct.forward(tile, coef);
      for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v) {
          const double e = coef[u * n + v] * coef[u * n + v];
          m.total_energy += e;
          if (u == 0) row0 += e;
          if (v == 0) col0 += e;
          if (u == 0 && v == 0) dc += e;
          m.mean_abs[u * n + v] += std::abs(coef[u * n + v]);
        }
      if (opt.keep_blocks) {
        std::vector<double> a(nn);
        std::transform(coef.begin(), coef.end(), a.begin(), [](double x) { return std::abs(x); });
        m.blocks.push_back(std::move(a));
      }
    }
  const double nblocks = double(m.blocks_x) * m.blocks_y;
  for (auto& v : m.mean_abs) v /= nblocks;
  if (m.total_energy > 0) {
    m.dc_fraction = dc / m.total_energy;
    m.first_row_fraction = row0 / m.total_energy;
    m.first_col_fraction = col0 / m.total_energy;
  }
  return m;
}

struct StatsReport {
  BasicStats stats;
  double iv = 0;
  double gm = 0;
  Histogram histogram;
  std::optional<DctEnergyMap> dct;
};

// Full report; the DCT energy map is computed only when a block size is given.
inline StatsReport analyze(const FeatureTensor& t, int nbins, std::optional<int> dct_block = std::nullopt,
                           std::optional<TruncationRegion> region = std::nullopt) {
  StatsReport rep;
  rep.stats = basic_stats(t);
  rep.iv = intensity_variance(t, region);
  rep.gm = gradient_magnitude(t, region);
  rep.histogram = histogram_cdf(t, nbins);
  if (dct_block) {
    DctEnergyOptions o;
    o.block = *dct_block;
    o.keep_blocks = false;
    o.region = region;
    rep.dct = dct_energy_map(t, o);
  }
  return rep;
}

inline nlohmann::json to_json(const StatsReport& r) {
  nlohmann::json j;
  j["min"] = r.stats.min;
  j["max"] = r.stats.max;
  j["mean"] = r.stats.mean;
  j["iv"] = r.iv;
  j["gm"] = r.gm;
  j["gm_scale"] = kGradientScale;
  j["histogram"] = {{"edges", r.histogram.edges},
                    {"counts", r.histogram.counts},
                    {"cdf", r.histogram.cdf},
                    {"display_hint", r.histogram.display_hint}};
  if (r.dct) {
    j["dct_energy"] = {{"block", r.dct->block},
                       {"blocks_x", r.dct->blocks_x},
                       {"blocks_y", r.dct->blocks_y},
                       {"dc_fraction", r.dct->dc_fraction},
                       {"first_row_fraction", r.dct->first_row_fraction},
                       {"first_col_fraction", r.dct->first_col_fraction},
                       {"total_energy", r.dct->total_energy},
                       {"mean_abs", r.dct->mean_abs}};
  }
  return j;
}

}  // namespace featcodec
