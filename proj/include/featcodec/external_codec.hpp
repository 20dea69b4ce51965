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

// Bridge to external YUV 4:0:0 codecs such as the VVC reference encoder.
//
// The .yuv file is headerless: one luma plane, one 16-bit little-endian word
// per sample, raster order, padded on the right and bottom by edge
// replication. The JSON sidecar records the true dimensions and everything
// needed to invert the packing.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "featcodec/byte_io.hpp"
#include "featcodec/errors.hpp"
#include "featcodec/packing.hpp"
#include "json.hpp"

namespace featcodec {

inline constexpr std::uint32_t kDefaultPadMultiple = 8;

inline std::string vtm_flags() {
  return "--InputChromaFormat=400 --ConformanceWindowMode=1 --InternalBitDepth=10 --InputBitDepth=10 "
         "--OutputBitDepth=10";
}

struct SidecarMeta {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t pad_right = 0;
  std::uint32_t pad_bottom = 0;
  int bits = 10;
  TaskKind task = TaskKind::Cls;
  std::optional<int> qp_hint;
  std::string vtm_flags;
  Provenance provenance;

  [[nodiscard]] std::uint32_t padded_width() const noexcept { return width + pad_right; }
  [[nodiscard]] std::uint32_t padded_height() const noexcept { return height + pad_bottom; }
  [[nodiscard]] std::size_t file_bytes() const noexcept { return std::size_t(padded_width()) * padded_height() * 2; }

  bool operator==(const SidecarMeta&) const = default;

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["width"] = width;
    j["height"] = height;
    j["pad_right"] = pad_right;
    j["pad_bottom"] = pad_bottom;
    j["bits"] = bits;
    j["task"] = std::string(to_string(task));
    j["qp_hint"] = qp_hint ? nlohmann::json(*qp_hint) : nlohmann::json(nullptr);
    j["vtm_flags"] = vtm_flags;
    j["provenance"] = provenance.to_json();
    return j;
  }

  static SidecarMeta from_json(const nlohmann::json& j) {
    try {
      SidecarMeta m;
      m.width = j.at("width").get<std::uint32_t>();
      m.height = j.at("height").get<std::uint32_t>();
      m.pad_right = j.at("pad_right").get<std::uint32_t>();
      m.pad_bottom = j.at("pad_bottom").get<std::uint32_t>();
      m.bits = j.at("bits").get<int>();
      auto task = parse_task(j.at("task").get<std::string>());
      if (!task) throw ValidationError("sidecar: unknown task");
      m.task = *task;
      if (j.contains("qp_hint") && !j["qp_hint"].is_null()) m.qp_hint = j["qp_hint"].get<int>();
      m.vtm_flags = j.value("vtm_flags", "");
      m.provenance = Provenance::from_json(j.at("provenance"));
      if (m.width == 0 || m.height == 0) throw ValidationError("sidecar: zero dimension");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("sidecar: ") + e.what());
    }
  }
};

inline std::uint32_t pad_amount(std::uint32_t extent, std::uint32_t multiple) {
  return multiple <= 1 ? 0 : (multiple - extent % multiple) % multiple;
}

inline SidecarMeta make_sidecar(const PackedPlane& p, std::uint32_t pad_multiple = kDefaultPadMultiple,
                                std::optional<int> qp_hint = std::nullopt) {
  return {p.width,  p.height,          pad_amount(p.width, pad_multiple), pad_amount(p.height, pad_multiple),
          p.bits,   p.provenance.task, qp_hint,                           vtm_flags(),
          p.provenance};
}

inline std::vector<std::uint8_t> to_yuv400_bytes(const PackedPlane& p, const SidecarMeta& meta) {
  if (p.bits != 10) throw ValidationError("YUV export requires 10-bit samples, plane has " + std::to_string(p.bits));
  if (p.samples.size() != std::size_t(p.width) * p.height) throw ValidationError("plane sample count mismatch");
  ByteWriter w;
  for (std::uint32_t r = 0; r < meta.padded_height(); ++r)
    for (std::uint32_t c = 0; c < meta.padded_width(); ++c) {
      auto s = p.at(std::min(r, p.height - 1), std::min(c, p.width - 1));
      if (s > 1023) throw ValidationError("sample exceeds 10-bit range");
      w.u16(s);
    }
  return w.take();
}

inline PackedPlane from_yuv400_bytes(std::span<const std::uint8_t> bytes, const SidecarMeta& meta) {
  if (meta.bits != 10) throw ValidationError("YUV import supports 10-bit planes only");
  if (bytes.size() != meta.file_bytes())
    throw ValidationError("YUV length mismatch: expected " + std::to_string(meta.file_bytes()) + " bytes, found " +
                          std::to_string(bytes.size()));
  PackedPlane p;
  p.width = meta.width;
  p.height = meta.height;
  p.bits = meta.bits;
  p.provenance = meta.provenance;
  p.samples.resize(std::size_t(p.width) * p.height);
  ByteReader r(bytes);
  for (std::uint32_t row = 0; row < meta.padded_height(); ++row)
    for (std::uint32_t col = 0; col < meta.padded_width(); ++col) {
      const auto s = r.u16();
      if (s > 1023)
        throw ValidationError("YUV sample " + std::to_string(s) + " at (" + std::to_string(row) + ", " +
                              std::to_string(col) + ") exceeds 10-bit range");
      if (row < p.height && col < p.width) p.at(row, col) = s;
    }
  return p;
}

inline void write_sidecar(const SidecarMeta& meta, const std::filesystem::path& path) {
  write_text(path, meta.to_json().dump(2) + "\n");
}

inline SidecarMeta read_sidecar(const std::filesystem::path& path) {
  try {
    return SidecarMeta::from_json(nlohmann::json::parse(read_text(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("sidecar '" + path.string() + "': " + e.what());
  }
}

// Writes the .yuv file only; persist the returned metadata with write_sidecar.
inline SidecarMeta export_yuv400(const PackedPlane& p, const std::filesystem::path& path,
                                 std::uint32_t pad_multiple = kDefaultPadMultiple,
                                 std::optional<int> qp_hint = std::nullopt) {
  auto meta = make_sidecar(p, pad_multiple, qp_hint);
  write_file(path, to_yuv400_bytes(p, meta));
  return meta;
}

inline PackedPlane import_yuv400(const std::filesystem::path& path, const SidecarMeta& meta) {
  return from_yuv400_bytes(read_file(path), meta);
}

// Size of an encoded bitstream file in bits.
inline std::uint64_t measure_bits(const std::filesystem::path& path) {
  std::error_code ec;
  auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat '" + path.string() + "': " + ec.message());
  return 8ull * size;
}

}  // namespace featcodec
