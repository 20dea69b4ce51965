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

// Deterministic synthetic features for desk-scale experiments.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "featcodec/errors.hpp"
#include "featcodec/feature_io.hpp"
#include "featcodec/packing.hpp"
#include "featcodec/preprocess.hpp"

namespace featcodec {

enum class SynthModel { Smooth, Noise, VStripe };

inline std::optional<SynthModel> parse_synth_model(std::string_view s) {
  if (s == "smooth") return SynthModel::Smooth;
  if (s == "noise") return SynthModel::Noise;
  if (s == "vstripe") return SynthModel::VStripe;
  return std::nullopt;
}

constexpr std::string_view to_string(SynthModel m) noexcept {
  switch (m) {
    case SynthModel::Smooth: return "smooth";
    case SynthModel::Noise: return "noise";
    case SynthModel::VStripe: return "vstripe";
  }
  return "?";
}

inline constexpr std::uint32_t kSynthCsrTokens = 64;

// Canonical shape of a task with the free spatial extents divided by `scale`
// (rounded up). Structural extents (Seg patches, Dpt 2x4, TTI channels) stay.
inline Shape synth_shape(TaskKind task, std::uint32_t scale = 1) {
  if (scale < 1) throw ValidationError("scale must be >= 1");
  auto s = [scale](std::uint32_t e) { return (e + scale - 1) / scale; };
  switch (task) {
    case TaskKind::Cls: return {s(257), s(1536)};
    case TaskKind::Seg: return {2, s(1370), s(1536)};
    case TaskKind::Dpt: return {2, 4, s(1611), s(1536)};
    case TaskKind::CSR: return {s(kSynthCsrTokens), s(4096)};
    case TaskKind::TTI: return {16, s(128), s(128)};
  }
  return {};
}

namespace detail {

// mt19937_64 is fully specified by the standard; the distributions are not,
// so conversions to real numbers are done here.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, TaskKind task, SynthModel model) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (1 + std::uint64_t(task) * 8 + std::uint64_t(model));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Values are generated per packing tile and centred in the task's VTM
// truncation region, so they exercise the full code range after quantization.
//   smooth   sum of four low-frequency 2-D sinusoids
//   noise    iid uniform over the region
//   vstripe  one random value per column, repeated down the rows, plus 1%
//            Gaussian noise
inline FeatureTensor synth_feature(TaskKind task, SynthModel model, std::uint64_t seed = 0, std::uint32_t scale = 1) {
  FeatureTensor t;
  t.task = task;
  t.splits = expected_splits(task);
  t.shape = synth_shape(task, scale);
  t.source_id = "synth:" + std::string(to_string(task)) + ":" + std::string(to_string(model)) + ":seed=" +
                std::to_string(seed) + ":scale=" + std::to_string(scale);
  t.data.resize(element_count(t.shape));

  const auto table = TruncationTable::vtm();
  const auto regions = regions_for(t, table);
  const auto layout = pack_layout(task, t.shape);
  const std::size_t tile = std::size_t(layout.tile_h) * layout.tile_w;
  const std::size_t tiles = t.data.size() / tile;
  SubTensorIndex sub(task, t.shape);
  detail::SynthRng rng(detail::mix_seed(seed, task, model));

  for (std::size_t k = 0; k < tiles; ++k) {
    const auto& region = regions[sub(k * tile)];
    const double center = 0.5 * (region.lo + region.hi);
    const double half = 0.5 * region.width();
    float* out = t.data.data() + k * tile;
    switch (model) {
      case SynthModel::Smooth: {
        struct Wave { double fr, fc, phase, amp; };
        Wave waves[4];
        double amp_sum = 0;
        for (auto& w : waves) {
          w = {rng.uniform(0.3, 2.5), rng.uniform(0.3, 2.5), rng.uniform(0, 2 * std::numbers::pi), rng.uniform(0.5, 1.0)};
          amp_sum += w.amp;
        }
        for (std::uint32_t r = 0; r < layout.tile_h; ++r)
          for (std::uint32_t c = 0; c < layout.tile_w; ++c) {
            double v = 0;
            for (const auto& w : waves)
              v += w.amp * std::sin(2 * std::numbers::pi * (w.fr * r / layout.tile_h + w.fc * c / layout.tile_w) + w.phase);
            out[std::size_t(r) * layout.tile_w + c] = static_cast<float>(center + 0.9 * half * v / amp_sum);
          }
        break;
      }
      case SynthModel::Noise:
        for (std::size_t i = 0; i < tile; ++i) out[i] = static_cast<float>(rng.uniform(region.lo, region.hi));
        break;
      case SynthModel::VStripe: {
        std::vector<double> profile(layout.tile_w);
        for (auto& p : profile) p = center + 0.6 * half * rng.uniform(-1.0, 1.0);
        for (std::uint32_t r = 0; r < layout.tile_h; ++r)
          for (std::uint32_t c = 0; c < layout.tile_w; ++c)
            out[std::size_t(r) * layout.tile_w + c] = static_cast<float>(profile[c] + 0.01 * half * rng.normal());
        break;
      }
    }
  }
  return t;
}

}  // namespace featcodec
