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

// FTEN feature container: n-dimensional float32 tensors tagged with the task
// and split point they were extracted at.
//
// Layout (all little-endian):
//   "FTEN" | version u16 | task u8 | split-count u8 | split ids u8[] |
//   ndim u8 | reserved u8 | extents u32[] | source-id length u16 + UTF-8 |
//   f32 data, row-major

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "featcodec/byte_io.hpp"
#include "featcodec/errors.hpp"
#include "featcodec/types.hpp"

namespace featcodec {

using Shape = std::vector<std::uint32_t>;

inline constexpr std::uint16_t kFtenVersion = 1;

// Product of extents. Returns nullopt when the product does not fit in
// size_t; an empty shape has no elements.
inline std::optional<std::size_t> checked_element_count(std::span<const std::uint32_t> shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (auto e : shape) {
    if (e != 0 && n > std::numeric_limits<std::size_t>::max() / e) return std::nullopt;
    n *= e;
  }
  return n;
}

inline std::size_t element_count(std::span<const std::uint32_t> shape) {
  auto n = checked_element_count(shape);
  if (!n) throw ValidationError("shape element count overflows");
  return *n;
}

inline std::string shape_to_string(std::span<const std::uint32_t> shape) {
  std::ostringstream os;
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  return os.str();
}

struct FeatureTensor {
  TaskKind task = TaskKind::Cls;
  std::vector<SplitPoint> splits;
  Shape shape;
  std::vector<float> data;
  std::string source_id;

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }
};

// Canonical: the exact extents the benchmark features have. Structural: any
// shape with the same rank and fixed structural extents (the leading 2x4 of
// Dpt, TTI channels in groups of four), which is what down-scaled synthetic
// tensors use.
enum class ShapePolicy { Canonical, Structural };

// Returns a description of why `shape` is outside the task's family, or
// nullopt if it is inside.
inline std::optional<std::string> shape_family_violation(TaskKind task, std::span<const std::uint32_t> shape,
                                                         ShapePolicy policy) {
  const auto got = shape_to_string(shape);
  auto fail = [&](const std::string& want) {
    return std::optional<std::string>("shape family: " + std::string(to_string(task)) + " expects " + want +
                                      ", got " + got);
  };
  const bool canonical = policy == ShapePolicy::Canonical;
  switch (task) {
    case TaskKind::Cls:
      if (shape.size() != 2) return fail("rank 2 (257x1536)");
      if (canonical && (shape[0] != 257 || shape[1] != 1536)) return fail("257x1536");
      break;
    case TaskKind::Seg:
      if (shape.size() != 3) return fail("rank 3 (2x1370x1536)");
      if (canonical && (shape[0] != 2 || shape[1] != 1370 || shape[2] != 1536)) return fail("2x1370x1536");
      break;
    case TaskKind::Dpt:
      if (shape.size() != 4 || shape[0] != 2 || shape[1] != 4) return fail("2x4xHxW (2x4x1611x1536)");
      if (canonical && (shape[2] != 1611 || shape[3] != 1536)) return fail("2x4x1611x1536");
      break;
    case TaskKind::CSR:
      if (shape.size() != 2) return fail("rank 2 (Nx4096)");
      if (canonical && shape[1] != 4096) return fail("Nx4096");
      break;
    case TaskKind::TTI:
      if (shape.size() != 3 || shape[0] == 0 || shape[0] % 4 != 0) return fail("Cx H x W with C a multiple of 4 (16x128x128)");
      if (canonical && (shape[0] != 16 || shape[1] != 128 || shape[2] != 128)) return fail("16x128x128");
      break;
  }
  return std::nullopt;
}

// Returns the first violated invariant, checked in order: split tags, positive
// extents, element count, shape family, finiteness.
inline std::optional<std::string> find_violation(const FeatureTensor& t, ShapePolicy policy) {
  if (t.splits != expected_splits(t.task))
    return "split tags: " + std::string(to_string(t.task)) + " requires " +
           std::to_string(expected_splits(t.task).size()) + " split tag(s) in canonical order";
  if (t.shape.empty()) return std::string("shape: at least one extent required");
  for (auto e : t.shape)
    if (e == 0) return std::string("shape: extents must be positive");
  auto n = checked_element_count(t.shape);
  if (!n) return std::string("shape: element count overflows");
  if (*n != t.data.size())
    return "element count: product(shape)=" + std::to_string(*n) + " but data has " + std::to_string(t.data.size());
  if (auto v = shape_family_violation(t.task, t.shape, policy)) return v;
  for (std::size_t i = 0; i < t.data.size(); ++i)
    if (!std::isfinite(t.data[i])) return "finiteness: element " + std::to_string(i) + " is not finite";
  return std::nullopt;
}

inline void validate(const FeatureTensor& t, ShapePolicy policy = ShapePolicy::Canonical) {
  if (auto v = find_violation(t, policy)) throw ValidationError(*v);
}

inline std::vector<std::uint8_t> serialize_feature(const FeatureTensor& t,
                                                   ShapePolicy policy = ShapePolicy::Canonical) {
  validate(t, policy);
  if (t.shape.size() > 255) throw ValidationError("FTEN supports at most 255 dimensions");
  if (t.source_id.size() > 0xFFFF) throw ValidationError("source_id longer than 65535 bytes");
  ByteWriter w;
  w.raw(std::string_view("FTEN"));
  w.u16(kFtenVersion);
  w.u8(static_cast<std::uint8_t>(t.task));
  w.u8(static_cast<std::uint8_t>(t.splits.size()));
  for (auto s : t.splits) w.u8(static_cast<std::uint8_t>(s));
  w.u8(static_cast<std::uint8_t>(t.shape.size()));
  w.u8(0);
  for (auto e : t.shape) w.u32(e);
  w.u16(static_cast<std::uint16_t>(t.source_id.size()));
  w.raw(t.source_id);
  for (float v : t.data) w.f32(v);
  return w.take();
}

inline FeatureTensor deserialize_feature(std::span<const std::uint8_t> bytes,
                                         ShapePolicy policy = ShapePolicy::Canonical) {
  FeatureTensor t;
  try {
    ByteReader r(bytes);
    if (r.str(4) != "FTEN") throw ValidationError("bad magic: not an FTEN container");
    if (auto v = r.u16(); v != kFtenVersion) throw ValidationError("unsupported FTEN version " + std::to_string(v));
    auto task = r.u8();
    if (!is_valid_task_code(task)) throw ValidationError("invalid task code " + std::to_string(task));
    t.task = static_cast<TaskKind>(task);
    auto nsplit = r.u8();
    for (int i = 0; i < nsplit; ++i) {
      auto s = r.u8();
      if (!is_valid_split_code(s)) throw ValidationError("invalid split code " + std::to_string(s));
      t.splits.push_back(static_cast<SplitPoint>(s));
    }
    auto ndim = r.u8();
    r.u8();  // reserved
    for (int i = 0; i < ndim; ++i) t.shape.push_back(r.u32());
    t.source_id = r.str(r.u16());
    auto n = checked_element_count(t.shape);
    if (!n || *n > r.remaining() / 4 || r.remaining() != *n * 4)
      throw ValidationError("payload length mismatch: header shape " + shape_to_string(t.shape) + " needs " +
                            (n ? std::to_string(*n * 4) : std::string("overflowing")) + " bytes, found " +
                            std::to_string(r.remaining()));
    t.data.resize(*n);
    for (auto& v : t.data) v = r.f32();
  } catch (const TruncatedInput&) {
    throw ValidationError("truncated FTEN header");
  }
  validate(t, policy);
  return t;
}

inline void save_feature(const FeatureTensor& t, const std::filesystem::path& path,
                         ShapePolicy policy = ShapePolicy::Canonical) {
  write_file(path, serialize_feature(t, policy));
}

inline FeatureTensor load_feature(const std::filesystem::path& path, ShapePolicy policy = ShapePolicy::Canonical) {
  return deserialize_feature(read_file(path), policy);
}

}  // namespace featcodec
