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

// Byte-oriented range coder with carry propagation (LZMA style) and an
// adaptive order-0 frequency model backed by a Fenwick tree.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "featcodec/byte_io.hpp"
#include "featcodec/errors.hpp"

namespace featcodec {

// Adaptive frequency table. Every symbol starts at count 1; coding a symbol
// adds `increment`; when the total exceeds `limit` all counts are halved
// (rounding up, so none drops to zero).
class AdaptiveModel {
 public:
  static constexpr std::uint32_t kMaxTotal = 1u << 16;

  explicit AdaptiveModel(std::uint32_t alphabet, std::uint32_t increment = 32, std::uint32_t limit = kMaxTotal)
      : freq_(alphabet, 1), tree_(alphabet + 1, 0), increment_(increment), limit_(limit) {
    if (alphabet < 1 || alphabet > limit / 2 || limit > kMaxTotal || increment < 1 || increment > limit / 2)
      throw ValidationError("adaptive model: invalid alphabet/increment/limit");
    rebuild();
  }

  [[nodiscard]] std::uint32_t alphabet() const noexcept { return static_cast<std::uint32_t>(freq_.size()); }
  [[nodiscard]] std::uint32_t total() const noexcept { return total_; }
  [[nodiscard]] std::uint32_t freq(std::uint32_t s) const { return freq_[s]; }

  // Sum of the frequencies of symbols below s.
  [[nodiscard]] std::uint32_t cum_freq(std::uint32_t s) const {
    std::uint32_t sum = 0;
    for (std::uint32_t i = s; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

  // Symbol s with cum_freq(s) <= target < cum_freq(s) + freq(s).
  [[nodiscard]] std::uint32_t symbol_for(std::uint32_t target) const {
    std::uint32_t pos = 0;
    const auto n = alphabet();
    for (std::uint32_t step = std::bit_floor(n); step > 0; step >>= 1) {
      if (pos + step <= n && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

  void update(std::uint32_t s) {
    freq_[s] += increment_;
    total_ += increment_;
    add(s, increment_);
    if (total_ > limit_) {
      for (auto& f : freq_) f = (f + 1) / 2;
      rebuild();
    }
  }

 private:
  void add(std::uint32_t s, std::uint32_t delta) {
    for (std::uint32_t i = s + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  void rebuild() {
    std::fill(tree_.begin(), tree_.end(), 0);
    total_ = 0;
    for (std::uint32_t s = 0; s < freq_.size(); ++s) {
      add(s, freq_[s]);
      total_ += freq_[s];
    }
  }

  std::vector<std::uint32_t> freq_;
  std::vector<std::uint32_t> tree_;
  std::uint32_t increment_;
  std::uint32_t limit_;
  std::uint32_t total_ = 0;
};

inline constexpr std::uint32_t kRangeTop = 1u << 24;
// Written after the last symbol; a decoder that reads anything else has lost
// sync with the encoder.
inline constexpr std::uint32_t kEndSentinel = 0xFC5E17A1u;

class RangeEncoder {
 public:
  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
    range_ /= total;
    low_ += std::uint64_t(cum) * range_;
    range_ *= freq;
    while (range_ < kRangeTop) {
      range_ <<= 8;
      shift_low();
    }
  }

  void encode_symbol(AdaptiveModel& m, std::uint32_t s) {
    encode(m.cum_freq(s), m.freq(s), m.total());
    m.update(s);
  }

  // Equiprobable bits, at most 16 per call.
  void encode_bits(std::uint32_t value, int nbits) {
    while (nbits > 0) {
      const int chunk = nbits > 16 ? 16 : nbits;
      nbits -= chunk;
      encode((value >> nbits) & ((1u << chunk) - 1u), 1, 1u << chunk);
    }
  }

  std::vector<std::uint8_t> finish() {
    encode_bits(kEndSentinel, 32);
    for (int i = 0; i < 5; ++i) shift_low();
    return std::move(out_);
  }

 private:
  void shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const auto carry = static_cast<std::uint8_t>(low_ >> 32);
      std::uint8_t byte = cache_;
      do {
        out_.push_back(static_cast<std::uint8_t>(byte + carry));
        byte = 0xFF;
      } while (--pending_ != 0);
      cache_ = static_cast<std::uint8_t>(low_ >> 24);
    }
    ++pending_;
    low_ = (low_ & 0x00FFFFFFu) << 8;
  }

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> in) : in_(in) {
    for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next();
  }

  std::uint32_t decode_symbol(AdaptiveModel& m) {
    range_ /= m.total();
    const std::uint32_t target = std::min(code_ / range_, m.total() - 1);
    const std::uint32_t s = m.symbol_for(target);
    consume(m.cum_freq(s), m.freq(s));
    m.update(s);
    return s;
  }

  std::uint32_t decode_bits(int nbits) {
    std::uint32_t value = 0;
    while (nbits > 0) {
      const int chunk = nbits > 16 ? 16 : nbits;
      nbits -= chunk;
      range_ >>= chunk;
      const std::uint32_t v = std::min(code_ / range_, (1u << chunk) - 1u);
      consume(v, 1);
      value = (value << chunk) | v;
    }
    return value;
  }

  // Checks the end-of-stream sentinel; throws CodecError on desync.
  void finish() {
    if (decode_bits(32) != kEndSentinel) throw CodecError("range decoder: end-of-stream sentinel mismatch (model desync)");
  }

  [[nodiscard]] std::size_t consumed() const noexcept { return pos_; }

 private:
  void consume(std::uint32_t cum, std::uint32_t freq) {
    code_ -= cum * range_;
    range_ *= freq;
    while (range_ < kRangeTop) {
      range_ <<= 8;
      code_ = (code_ << 8) | next();
    }
  }

  std::uint8_t next() {
    if (pos_ >= in_.size()) throw CodecError("range decoder: payload exhausted");
    return in_[pos_++];
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

// Standalone symbol-stream coding with a fresh AdaptiveModel of the given
// alphabet. Stream layout: symbol count u32 LE | range-coded body.
inline std::vector<std::uint8_t> range_encode(std::span<const std::uint32_t> symbols, std::uint32_t alphabet) {
  AdaptiveModel model(alphabet);
  ByteWriter w;
  if (symbols.size() > 0xFFFFFFFFu) throw ValidationError("range_encode: too many symbols");
  w.u32(static_cast<std::uint32_t>(symbols.size()));
  RangeEncoder enc;
  for (auto s : symbols) {
    if (s >= alphabet) throw ValidationError("range_encode: symbol outside alphabet");
    enc.encode_symbol(model, s);
  }
  w.raw(enc.finish());
  return w.take();
}

inline std::vector<std::uint32_t> range_decode(std::span<const std::uint8_t> bytes, std::uint32_t alphabet) {
  if (bytes.size() < 4) throw CodecError("range_decode: missing symbol count");
  ByteReader r(bytes);
  const std::uint32_t count = r.u32();
  AdaptiveModel model(alphabet);
  RangeDecoder dec(r.rest());
  std::vector<std::uint32_t> out;
  out.reserve(std::min<std::size_t>(count, r.remaining() * 64));
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(dec.decode_symbol(model));
  dec.finish();
  return out;
}

}  // namespace featcodec
