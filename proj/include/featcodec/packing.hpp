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

// Packing of quantized tensors into a single 2D plane and back.
//
// Every task family reduces to a grid of equally sized tiles:
//   Cls  [R, C]        -> 1 x 1 grid of R x C            (identity)
//   CSR  [N, C]        -> 1 x 1 grid of N x C            (identity)
//   Seg  [P, R, C]     -> P x 1 grid, patches stacked vertically
//   Dpt  [2, 4, R, C]  -> 2 x 4 grid, layers side by side, original image
//                         above the flipped one
//   TTI  [K, R, C]     -> K/4 x 4 grid, channel 4g+k at grid cell (g, k)
// Tile (gr, gc) covers plane rows gr*R.. and columns gc*C.., and holds the
// tensor slab at flat offset (gr * grid_cols + gc) * R * C.

#include <cstdint>
#include <string>
#include <vector>

#include "featcodec/errors.hpp"
#include "featcodec/feature_io.hpp"
#include "featcodec/preprocess.hpp"
#include "json.hpp"

namespace featcodec {

// Everything needed to turn a plane back into the QuantizedTensor it came from.
struct Provenance {
  TaskKind task = TaskKind::Cls;
  std::vector<SplitPoint> splits;
  Shape shape;
  std::vector<TruncationRegion> regions;
  std::string source_id;

  bool operator==(const Provenance&) const = default;

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["task"] = std::string(to_string(task));
    auto& js = j["splits"] = nlohmann::json::array();
    for (auto s : splits) js.push_back(std::string(to_string(s)));
    j["shape"] = shape;
    auto& jr = j["regions"] = nlohmann::json::array();
    for (const auto& r : regions) jr.push_back({r.lo, r.hi});
    j["source_id"] = source_id;
    return j;
  }

  static Provenance from_json(const nlohmann::json& j) {
    try {
      Provenance p;
      auto task = parse_task(j.at("task").get<std::string>());
      if (!task) throw ValidationError("provenance: unknown task");
      p.task = *task;
      for (const auto& s : j.at("splits")) {
        auto sp = parse_split(s.get<std::string>());
        if (!sp) throw ValidationError("provenance: unknown split point");
        p.splits.push_back(*sp);
      }
      p.shape = j.at("shape").get<Shape>();
      for (const auto& r : j.at("regions")) p.regions.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
      p.source_id = j.value("source_id", "");
      return p;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("provenance: ") + e.what());
    }
  }
};

struct PackedPlane {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int bits = 10;
  std::vector<std::uint16_t> samples;  // raster order
  Provenance provenance;

  [[nodiscard]] std::uint16_t at(std::uint32_t row, std::uint32_t col) const { return samples[std::size_t(row) * width + col]; }
  std::uint16_t& at(std::uint32_t row, std::uint32_t col) { return samples[std::size_t(row) * width + col]; }

  bool operator==(const PackedPlane&) const = default;
};

struct PackLayout {
  std::uint32_t grid_rows = 1;
  std::uint32_t grid_cols = 1;
  std::uint32_t tile_h = 0;
  std::uint32_t tile_w = 0;

  [[nodiscard]] std::uint32_t width() const noexcept { return grid_cols * tile_w; }
  [[nodiscard]] std::uint32_t height() const noexcept { return grid_rows * tile_h; }
};

inline PackLayout pack_layout(TaskKind task, std::span<const std::uint32_t> shape) {
  if (auto v = shape_family_violation(task, shape, ShapePolicy::Structural)) throw ValidationError(*v);
  for (auto e : shape)
    if (e == 0) throw ValidationError("shape: extents must be positive");
  PackLayout l;
  switch (task) {
    case TaskKind::Cls:
    case TaskKind::CSR: l = {1, 1, shape[0], shape[1]}; break;
    case TaskKind::Seg: l = {shape[0], 1, shape[1], shape[2]}; break;
    case TaskKind::Dpt: l = {shape[0], shape[1], shape[2], shape[3]}; break;
    case TaskKind::TTI: l = {shape[0] / 4, 4, shape[1], shape[2]}; break;
  }
  const std::uint64_t w = std::uint64_t(l.grid_cols) * l.tile_w;
  const std::uint64_t h = std::uint64_t(l.grid_rows) * l.tile_h;
  if (w > 0xFFFFFFFFu || h > 0xFFFFFFFFu) throw ValidationError("packed plane dimensions overflow");
  return l;
}

namespace detail {
// Calls f(tensor_index, plane_index) for every element, tile by tile.
template <class F>
void for_each_packed(const PackLayout& l, F&& f) {
  const std::size_t tile = std::size_t(l.tile_h) * l.tile_w;
  const std::size_t width = l.width();
  for (std::uint32_t gr = 0; gr < l.grid_rows; ++gr)
    for (std::uint32_t gc = 0; gc < l.grid_cols; ++gc) {
      std::size_t src = (std::size_t(gr) * l.grid_cols + gc) * tile;
      for (std::uint32_t r = 0; r < l.tile_h; ++r) {
        std::size_t dst = (std::size_t(gr) * l.tile_h + r) * width + std::size_t(gc) * l.tile_w;
        for (std::uint32_t c = 0; c < l.tile_w; ++c) f(src++, dst++);
      }
    }
}
}  // namespace detail

inline PackedPlane pack(const QuantizedTensor& q) {
  validate(q);
  const auto layout = pack_layout(q.task, q.shape);
  PackedPlane p;
  p.width = layout.width();
  p.height = layout.height();
  p.bits = q.bits;
  p.provenance = {q.task, q.splits, q.shape, q.regions, q.source_id};
  p.samples.resize(q.codes.size());
  detail::for_each_packed(layout, [&](std::size_t src, std::size_t dst) { p.samples[dst] = q.codes[src]; });
  return p;
}

inline QuantizedTensor unpack(const PackedPlane& p) {
  const auto& prov = p.provenance;
  const auto layout = pack_layout(prov.task, prov.shape);
  if (layout.width() != p.width || layout.height() != p.height)
    throw ValidationError("plane " + std::to_string(p.width) + "x" + std::to_string(p.height) + " (WxH) does not match " +
                          std::string(to_string(prov.task)) + " shape " + shape_to_string(prov.shape) + ", which packs to " +
                          std::to_string(layout.width()) + "x" + std::to_string(layout.height()));
  if (p.samples.size() != std::size_t(p.width) * p.height)
    throw ValidationError("plane sample count does not match width*height");
  QuantizedTensor q{prov.task, prov.splits, prov.shape, {}, p.bits, prov.regions, prov.source_id};
  q.codes.resize(p.samples.size());
  detail::for_each_packed(layout, [&](std::size_t src, std::size_t dst) { q.codes[src] = p.samples[dst]; });
  validate(q);
  return q;
}

}  // namespace featcodec
