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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "featcodec.hpp"

namespace featcodec::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(FEATCODEC_FIXTURE_DIR) / name;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("featcodec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Small random shape inside the task's structural family.
inline Shape random_shape(TaskKind task, std::mt19937_64& rng, std::uint32_t max_extent = 24) {
  auto e = [&] { return std::uniform_int_distribution<std::uint32_t>(1, max_extent)(rng); };
  switch (task) {
    case TaskKind::Cls:
    case TaskKind::CSR: return {e(), e()};
    case TaskKind::Seg: return {std::uniform_int_distribution<std::uint32_t>(1, 3)(rng), e(), e()};
    case TaskKind::Dpt: return {2, 4, e(), e()};
    case TaskKind::TTI: return {4 * std::uniform_int_distribution<std::uint32_t>(1, 4)(rng), e(), e()};
  }
  return {};
}

inline FeatureTensor random_feature(TaskKind task, const Shape& shape, std::mt19937_64& rng, double lo = -30,
                                    double hi = 30) {
  FeatureTensor t{task, expected_splits(task), shape, {}, "random"};
  t.data.resize(element_count(shape));
  std::uniform_real_distribution<double> d(lo, hi);
  for (auto& v : t.data) v = static_cast<float>(d(rng));
  return t;
}

inline QuantizedTensor random_quantized(TaskKind task, const Shape& shape, std::mt19937_64& rng, int bits = 10) {
  QuantizedTensor q{task, expected_splits(task), shape, {}, bits, {}, "random"};
  q.regions.assign(q.splits.size(), TruncationRegion{-1, 1});
  q.codes.resize(element_count(shape));
  std::uniform_int_distribution<std::uint32_t> d(0, (1u << bits) - 1);
  for (auto& c : q.codes) c = static_cast<std::uint16_t>(d(rng));
  return q;
}

inline PackedPlane make_plane(std::uint32_t width, std::uint32_t height, std::vector<std::uint16_t> samples,
                              int bits = 10) {
  PackedPlane p;
  p.width = width;
  p.height = height;
  p.bits = bits;
  p.samples = std::move(samples);
  p.provenance = {TaskKind::Cls, expected_splits(TaskKind::Cls), {height, width}, {{0.0, 1.0}}, "plane"};
  return p;
}

inline PackedPlane noise_plane(std::uint32_t width, std::uint32_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> d(0, 1023);
  std::vector<std::uint16_t> s(std::size_t(width) * height);
  for (auto& v : s) v = static_cast<std::uint16_t>(d(rng));
  return make_plane(width, height, std::move(s));
}

// Sum of a few low-frequency cosines plus mild noise, in [0, 1023].
inline PackedPlane smooth_plane(std::uint32_t width, std::uint32_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0, 6.283185307179586);
  std::normal_distribution<double> noise(0, 4);
  const double p1 = phase(rng), p2 = phase(rng);
  std::vector<std::uint16_t> s(std::size_t(width) * height);
  for (std::uint32_t r = 0; r < height; ++r)
    for (std::uint32_t c = 0; c < width; ++c) {
      double v = 512 + 250 * std::cos(0.07 * r + p1) + 200 * std::sin(0.05 * c + 0.03 * r + p2) + noise(rng);
      s[std::size_t(r) * width + c] = static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, 1023.0));
    }
  return make_plane(width, height, std::move(s));
}

inline double plane_mse(const PackedPlane& a, const PackedPlane& b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = double(a.samples[i]) - double(b.samples[i]);
    sum += d * d;
  }
  return sum / double(a.samples.size());
}

inline bool bitwise_equal(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace featcodec::testing
