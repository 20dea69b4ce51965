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

// Built-in lossy intra codec for packed planes.
//
// The plane is padded to a multiple of the block size by edge replication and
// coded block by block in raster order: level shift by 2^(bits-1), 2-D DCT,
// uniform quantization with step 2^((qp - 4) / 6) (ties away from zero), then
// zigzag scan. The DC level is coded as a difference from the previous
// block's DC; AC levels as (zero-run, magnitude class) symbols followed by
// sign and mantissa bits. Symbols go through adaptive order-0 models, one per
// zigzag band, and a range coder.
//
// FCBS layout (little-endian):
//   "FCBS" | version u16 | width u32 | height u32 | bits u8 | qp u8 |
//   provenance length u32 + provenance JSON | payload
// The payload starts with the block size (u8) followed by the range-coded
// block data.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "featcodec/byte_io.hpp"
#include "featcodec/dct.hpp"
#include "featcodec/errors.hpp"
#include "featcodec/packing.hpp"
#include "featcodec/range_coder.hpp"

namespace featcodec {

inline constexpr std::uint16_t kFcbsVersion = 1;
inline constexpr std::array<int, 5> kQpLadder = {22, 27, 32, 37, 42};

struct CodecConfig {
  int qp = 32;
  int block = 16;
  int bits = 10;
};

inline void validate(const CodecConfig& cfg) {
  if (cfg.qp < 0 || cfg.qp > 51) throw ValidationError("qp " + std::to_string(cfg.qp) + " outside [0, 51]");
  if (cfg.block != 4 && cfg.block != 8 && cfg.block != 16 && cfg.block != 32)
    throw ValidationError("block size must be 4, 8, 16 or 32");
  check_bits(cfg.bits);
}

inline double quant_step(int qp) { return std::exp2((qp - 4) / 6.0); }

struct BitstreamHeader {
  std::uint16_t version = kFcbsVersion;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t bits = 10;
  std::uint8_t qp = 0;
  std::string provenance;  // JSON text
  std::size_t payload_offset = 0;

  static BitstreamHeader parse(std::span<const std::uint8_t> bytes) {
    BitstreamHeader h;
    try {
      ByteReader r(bytes);
      if (r.str(4) != "FCBS") throw CodecError("bad magic: not an FCBS bitstream");
      h.version = r.u16();
      if (h.version != kFcbsVersion) throw CodecError("unsupported FCBS version " + std::to_string(h.version));
      h.width = r.u32();
      h.height = r.u32();
      h.bits = r.u8();
      h.qp = r.u8();
      if (h.width == 0 || h.height == 0) throw CodecError("corrupt header: zero plane dimension");
      if (h.bits < 8 || h.bits > 16) throw CodecError("corrupt header: bit depth " + std::to_string(h.bits));
      if (h.qp > 51) throw CodecError("corrupt header: qp " + std::to_string(h.qp));
      const auto len = r.u32();
      if (len > r.remaining()) throw CodecError("corrupt header: provenance length exceeds stream");
      h.provenance = r.str(len);
      h.payload_offset = r.position();
    } catch (const TruncatedInput&) {
      throw CodecError("corrupt header: stream too short");
    }
    return h;
  }
};

struct Bitstream {
  std::vector<std::uint8_t> bytes;

  [[nodiscard]] std::uint64_t total_bits() const noexcept { return 8ull * bytes.size(); }
  [[nodiscard]] BitstreamHeader header() const { return BitstreamHeader::parse(bytes); }
};

namespace detail {

inline constexpr int kMaxCategory = 24;
inline constexpr int kMaxRun = 15;
inline constexpr std::uint32_t kEob = (kMaxRun + 1) * kMaxCategory;
inline constexpr std::uint32_t kZrl = kEob + 1;
inline constexpr std::uint32_t kAcAlphabet = kZrl + 1;
inline constexpr std::uint32_t kDcAlphabet = kMaxCategory + 1;
inline constexpr int kBands = 4;

// Zigzag scan order of an n x n block (JPEG convention).
inline std::vector<int> zigzag_order(int n) {
  std::vector<int> order;
  order.reserve(std::size_t(n) * n);
  for (int d = 0; d < 2 * n - 1; ++d) {
    if (d % 2 == 0) {
      for (int r = std::min(d, n - 1); r >= 0 && d - r < n; --r) order.push_back(r * n + (d - r));
    } else {
      for (int c = std::min(d, n - 1); c >= 0 && d - c < n; --c) order.push_back((d - c) * n + c);
    }
  }
  return order;
}

// Band of a zigzag position: [1,4) [4,16) [16,64) [64,...).
inline int band_of(int pos) {
  if (pos < 4) return 0;
  if (pos < 16) return 1;
  if (pos < 64) return 2;
  return 3;
}

inline int category(std::int64_t v) {
  std::uint64_t a = v < 0 ? std::uint64_t(-v) : std::uint64_t(v);
  return a == 0 ? 0 : std::bit_width(a);
}

inline std::int64_t round_away(double x) { return static_cast<std::int64_t>(std::round(x)); }

struct Models {
  AdaptiveModel dc{kDcAlphabet};
  std::array<AdaptiveModel, kBands> ac{AdaptiveModel{kAcAlphabet}, AdaptiveModel{kAcAlphabet},
                                       AdaptiveModel{kAcAlphabet}, AdaptiveModel{kAcAlphabet}};
};

inline void put_mantissa(RangeEncoder& enc, std::int64_t v, int cat) {
  const std::uint64_t a = v < 0 ? std::uint64_t(-v) : std::uint64_t(v);
  enc.encode_bits(v < 0 ? 1u : 0u, 1);
  if (cat > 1) enc.encode_bits(static_cast<std::uint32_t>(a & ((1ull << (cat - 1)) - 1)), cat - 1);
}

inline std::int64_t get_mantissa(RangeDecoder& dec, int cat) {
  const bool negative = dec.decode_bits(1) != 0;
  std::uint64_t a = 1ull << (cat - 1);
  if (cat > 1) a |= dec.decode_bits(cat - 1);
  return negative ? -std::int64_t(a) : std::int64_t(a);
}

inline void check_category(int cat) {
  if (cat > kMaxCategory) throw CodecError("coefficient magnitude exceeds codec range");
}

// Padded plane sample with edge replication.
inline double padded_sample(const PackedPlane& p, std::uint32_t row, std::uint32_t col) {
  return p.at(std::min(row, p.height - 1), std::min(col, p.width - 1));
}

}  // namespace detail

inline Bitstream encode(const PackedPlane& plane, const CodecConfig& cfg) {
  validate(cfg);
  if (plane.bits != cfg.bits)
    throw ValidationError("plane bit depth " + std::to_string(plane.bits) + " differs from codec bit depth " +
                          std::to_string(cfg.bits));
  if (plane.width == 0 || plane.height == 0 || plane.samples.size() != std::size_t(plane.width) * plane.height)
    throw ValidationError("plane dimensions do not match sample count");
  const std::uint32_t max_code = (1u << cfg.bits) - 1u;
  for (auto s : plane.samples)
    if (s > max_code) throw ValidationError("sample " + std::to_string(s) + " exceeds bit depth");

  const int n = cfg.block;
  const std::size_t nn = std::size_t(n) * n;
  const std::uint32_t bw = (plane.width + n - 1) / n;
  const std::uint32_t bh = (plane.height + n - 1) / n;
  const double step = quant_step(cfg.qp);
  const double offset = double(1u << (cfg.bits - 1));
  const auto zigzag = detail::zigzag_order(n);

  Dct2d dct(n);
  detail::Models models;
  RangeEncoder enc;
  std::vector<double> block(nn), coef(nn);
  std::vector<std::int64_t> levels(nn);
  std::int64_t prev_dc = 0;

  for (std::uint32_t by = 0; by < bh; ++by)
    for (std::uint32_t bx = 0; bx < bw; ++bx) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          block[std::size_t(r) * n + c] = detail::padded_sample(plane, by * n + r, bx * n + c) - offset;
      dct.forward(block, coef);
      for (std::size_t k = 0; k < nn; ++k) levels[k] = detail::round_away(coef[zigzag[k]] / step);

      const std::int64_t diff = levels[0] - prev_dc;
      prev_dc = levels[0];
      const int dc_cat = detail::category(diff);
      detail::check_category(dc_cat);
      enc.encode_symbol(models.dc, static_cast<std::uint32_t>(dc_cat));
      if (dc_cat > 0) detail::put_mantissa(enc, diff, dc_cat);

      int last = 0;
      for (int k = int(nn) - 1; k > 0; --k)
        if (levels[k] != 0) {
          last = k;
          break;
        }
      int pos = 1;
      while (pos <= last) {
        int run = 0;
        while (levels[pos + run] == 0) ++run;
        while (run > detail::kMaxRun) {
          enc.encode_symbol(models.ac[detail::band_of(pos)], detail::kZrl);
          pos += detail::kMaxRun + 1;
          run -= detail::kMaxRun + 1;
        }
        const std::int64_t v = levels[pos + run];
        const int cat = detail::category(v);
        detail::check_category(cat);
        enc.encode_symbol(models.ac[detail::band_of(pos)],
                          static_cast<std::uint32_t>(run * detail::kMaxCategory + (cat - 1)));
        detail::put_mantissa(enc, v, cat);
        pos += run + 1;
      }
      if (pos < int(nn)) enc.encode_symbol(models.ac[detail::band_of(pos)], detail::kEob);
    }

  const std::string prov = plane.provenance.to_json().dump();
  ByteWriter w;
  w.raw(std::string_view("FCBS"));
  w.u16(kFcbsVersion);
  w.u32(plane.width);
  w.u32(plane.height);
  w.u8(static_cast<std::uint8_t>(cfg.bits));
  w.u8(static_cast<std::uint8_t>(cfg.qp));
  w.u32(static_cast<std::uint32_t>(prov.size()));
  w.raw(prov);
  w.u8(static_cast<std::uint8_t>(n));
  w.raw(enc.finish());
  return {w.take()};
}

inline PackedPlane decode(std::span<const std::uint8_t> bytes) {
  const auto h = BitstreamHeader::parse(bytes);
  PackedPlane plane;
  plane.width = h.width;
  plane.height = h.height;
  plane.bits = h.bits;
  try {
    plane.provenance = Provenance::from_json(nlohmann::json::parse(h.provenance));
  } catch (const nlohmann::json::exception& e) {
    throw CodecError(std::string("corrupt provenance: ") + e.what());
  } catch (const ValidationError& e) {
    throw CodecError(std::string("corrupt provenance: ") + e.what());
  }
  if (std::uint64_t(h.width) * h.height > (1ull << 34)) throw CodecError("corrupt header: plane too large");

  auto payload = bytes.subspan(h.payload_offset);
  if (payload.empty()) throw CodecError("payload exhausted before block size");
  const int n = payload[0];
  if (n != 4 && n != 8 && n != 16 && n != 32) throw CodecError("corrupt payload: block size " + std::to_string(n));
  const std::size_t nn = std::size_t(n) * n;
  const std::uint32_t bw = (h.width + n - 1) / n;
  const std::uint32_t bh = (h.height + n - 1) / n;
  const double step = quant_step(h.qp);
  const double offset = double(1u << (h.bits - 1));
  const double max_code = double((1u << h.bits) - 1u);
  const auto zigzag = detail::zigzag_order(n);

  Dct2d dct(n);
  detail::Models models;
  RangeDecoder dec(payload.subspan(1));
  std::vector<double> coef(nn), block(nn);
  std::int64_t prev_dc = 0;
  plane.samples.assign(std::size_t(h.width) * h.height, 0);

  for (std::uint32_t by = 0; by < bh; ++by)
    for (std::uint32_t bx = 0; bx < bw; ++bx) {
      std::fill(coef.begin(), coef.end(), 0.0);
      const int dc_cat = static_cast<int>(dec.decode_symbol(models.dc));
      std::int64_t dc = prev_dc + (dc_cat > 0 ? detail::get_mantissa(dec, dc_cat) : 0);
      prev_dc = dc;
      coef[zigzag[0]] = double(dc) * step;

      int pos = 1;
      while (pos < int(nn)) {
        const std::uint32_t sym = dec.decode_symbol(models.ac[detail::band_of(pos)]);
        if (sym == detail::kEob) break;
        if (sym == detail::kZrl) {
          pos += detail::kMaxRun + 1;
          if (pos >= int(nn)) throw CodecError("corrupt payload: zero run past end of block");
          continue;
        }
        const int run = static_cast<int>(sym / detail::kMaxCategory);
        const int cat = static_cast<int>(sym % detail::kMaxCategory) + 1;
        pos += run;
        if (pos >= int(nn)) throw CodecError("corrupt payload: coefficient index past end of block");
        coef[zigzag[pos]] = double(detail::get_mantissa(dec, cat)) * step;
        ++pos;
      }
      dct.inverse(coef, block);
      for (int r = 0; r < n; ++r) {
        const std::uint32_t row = by * n + r;
        if (row >= h.height) break;
        for (int c = 0; c < n; ++c) {
          const std::uint32_t col = bx * n + c;
          if (col >= h.width) break;
          const double v = std::clamp(std::round(block[std::size_t(r) * n + c] + offset), 0.0, max_code);
          plane.at(row, col) = static_cast<std::uint16_t>(v);
        }
      }
    }
  dec.finish();
  return plane;
}

inline PackedPlane decode(const Bitstream& b) { return decode(b.bytes); }

}  // namespace featcodec
