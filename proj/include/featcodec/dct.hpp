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

// Orthonormal separable 2-D DCT-II on square blocks.
//
// Coefficient (u, v) is stored at u * n + v, where u is the vertical
// frequency (row index) and v the horizontal frequency (column index).

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "featcodec/errors.hpp"

namespace featcodec {

class Dct2d {
 public:
  explicit Dct2d(int n) : n_(n), basis_(std::size_t(n) * n), tmp_(std::size_t(n) * n) {
    if (n < 1) throw ValidationError("DCT size must be positive");
    for (int k = 0; k < n; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      for (int i = 0; i < n; ++i)
        basis_[std::size_t(k) * n + i] = scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    }
  }

  [[nodiscard]] int size() const noexcept { return n_; }

  // out = C * in * C^T
  void forward(std::span<const double> in, std::span<double> out) {
    check(in, out);
    const std::size_t n = n_;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += basis_[u * n + i] * in[i * n + j];
        tmp_[u * n + j] = s;
      }
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += tmp_[u * n + j] * basis_[v * n + j];
        out[u * n + v] = s;
      }
  }

  // out = C^T * in * C
  void inverse(std::span<const double> in, std::span<double> out) {
    check(in, out);
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t v = 0; v < n; ++v) {
        double s = 0;
        for (std::size_t u = 0; u < n; ++u) s += basis_[u * n + i] * in[u * n + v];
        tmp_[i * n + v] = s;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t v = 0; v < n; ++v) s += tmp_[i * n + v] * basis_[v * n + j];
        out[i * n + j] = s;
      }
  }

 private:
  void check(std::span<const double> in, std::span<double> out) const {
    const std::size_t want = std::size_t(n_) * n_;
    if (in.size() != want || out.size() != want) throw ValidationError("DCT block size mismatch");
  }

  int n_;
  std::vector<double> basis_;  // basis_[k * n + i]
  std::vector<double> tmp_;
};

inline std::vector<double> dct2(std::span<const double> block, int n) {
  std::vector<double> out(block.size());
  Dct2d(n).forward(block, out);
  return out;
}

inline std::vector<double> idct2(std::span<const double> coeffs, int n) {
  std::vector<double> out(coeffs.size());
  Dct2d(n).inverse(coeffs, out);
  return out;
}

}  // namespace featcodec
