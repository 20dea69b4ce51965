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

// Truncation, uniform scalar quantization to integer codes, normalization,
// and their inverses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "featcodec/errors.hpp"
#include "featcodec/feature_io.hpp"
#include "featcodec/types.hpp"
#include "json.hpp"

namespace featcodec {

struct TruncationRegion {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool valid() const noexcept { return std::isfinite(lo) && std::isfinite(hi) && lo < hi; }
  [[nodiscard]] double clamp(double x) const noexcept { return std::clamp(x, lo, hi); }

  bool operator==(const TruncationRegion&) const = default;
};

inline void check_region(const TruncationRegion& r) {
  if (!r.valid())
    throw ValidationError("truncation region [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                          "] must be finite with lo < hi");
}

// Regions keyed by (task, split point).
class TruncationTable {
 public:
  TruncationTable() = default;

  void set(TaskKind task, SplitPoint split, TruncationRegion region) {
    check_region(region);
    entries_[{task, split}] = region;
  }

  [[nodiscard]] const TruncationRegion* find(TaskKind task, SplitPoint split) const {
    auto it = entries_.find({task, split});
    return it == entries_.end() ? nullptr : &it->second;
  }

  [[nodiscard]] const TruncationRegion& at(TaskKind task, SplitPoint split) const {
    if (auto* r = find(task, split)) return *r;
    throw ValidationError("missing truncation entry for " + std::string(to_string(task)) + "/" +
                          std::string(to_string(split)));
  }

  [[nodiscard]] bool covers(TaskKind task) const {
    for (auto s : expected_splits(task))
      if (!find(task, s)) return false;
    return true;
  }

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] const auto& entries() const noexcept { return entries_; }

  // Regions used with the VTM baseline.
  static TruncationTable vtm() {
    TruncationTable t;
    t.set(TaskKind::Cls, SplitPoint::DS, {-20, 20});
    t.set(TaskKind::Seg, SplitPoint::DS, {-20, 20});
    t.set(TaskKind::Dpt, SplitPoint::DM1, {-1, 1});
    t.set(TaskKind::Dpt, SplitPoint::DM2, {-2, 2});
    t.set(TaskKind::Dpt, SplitPoint::DM3, {-10, 10});
    t.set(TaskKind::Dpt, SplitPoint::DM4, {-20, 20});
    t.set(TaskKind::CSR, SplitPoint::G, {-5, 5});
    t.set(TaskKind::TTI, SplitPoint::H, {-4.09, 3.05});
    return t;
  }

  // Regions used with the learned (hyperprior) baseline.
  static TruncationTable hyperprior() {
    TruncationTable t = vtm();
    t.set(TaskKind::Cls, SplitPoint::DS, {-5, 5});
    t.set(TaskKind::Seg, SplitPoint::DS, {-5, 5});
    t.set(TaskKind::Dpt, SplitPoint::DM4, {-10, 10});
    return t;
  }

  // {"cls": {"SP_DS": [-20, 20]}, "dpt": {"SP_DM1": [-1, 1], ...}, ...}
  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, r] : entries_)
      j[std::string(to_string(key.first))][std::string(to_string(key.second))] = {r.lo, r.hi};
    return j;
  }

  static TruncationTable from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("truncation table must be a JSON object");
    TruncationTable t;
    for (const auto& [task_name, splits] : j.items()) {
      auto task = parse_task(task_name);
      if (!task) throw ValidationError("truncation table: unknown task '" + task_name + "'");
      if (!splits.is_object()) throw ValidationError("truncation table: entry for '" + task_name + "' must be an object");
      for (const auto& [split_name, range] : splits.items()) {
        auto split = parse_split(split_name);
        if (!split) throw ValidationError("truncation table: unknown split point '" + split_name + "'");
        if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
          throw ValidationError("truncation table: " + task_name + "/" + split_name + " must be [lo, hi]");
        t.set(*task, *split, {range[0].get<double>(), range[1].get<double>()});
      }
    }
    return t;
  }

 private:
  std::map<std::pair<TaskKind, SplitPoint>, TruncationRegion> entries_;
};

// Maps a flat element index to the sub-tensor (split point) it belongs to.
// Dpt stacks its four layers on axis 1; every other task is one sub-tensor.
class SubTensorIndex {
 public:
  SubTensorIndex(TaskKind task, std::span<const std::uint32_t> shape) {
    if (task == TaskKind::Dpt && shape.size() == 4) {
      count_ = shape[1];
      inner_ = static_cast<std::size_t>(shape[2]) * shape[3];
    }
  }

  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] std::size_t operator()(std::size_t flat) const noexcept {
    return count_ == 1 ? 0 : (flat / inner_) % count_;
  }

 private:
  std::size_t count_ = 1;
  std::size_t inner_ = 1;
};

inline std::vector<TruncationRegion> regions_for(const FeatureTensor& t, const TruncationTable& table) {
  std::vector<TruncationRegion> out;
  out.reserve(t.splits.size());
  for (auto s : t.splits) out.push_back(table.at(t.task, s));
  return out;
}

// Per-sub-tensor empirical [min, max]. A constant sub-tensor gets [v, v + 1]
// so the region stays non-degenerate and every element maps to code 0.
inline std::vector<TruncationRegion> empirical_regions(const FeatureTensor& t) {
  SubTensorIndex idx(t.task, t.shape);
  std::vector<double> lo(idx.count(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(idx.count(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    auto k = idx(i);
    lo[k] = std::min(lo[k], static_cast<double>(t.data[i]));
    hi[k] = std::max(hi[k], static_cast<double>(t.data[i]));
  }
  std::vector<TruncationRegion> out;
  for (std::size_t k = 0; k < idx.count(); ++k) {
    if (!(lo[k] <= hi[k])) throw ValidationError("empirical region of an empty tensor");
    out.push_back({lo[k], hi[k] > lo[k] ? hi[k] : lo[k] + 1.0});
  }
  return out;
}

inline TruncationTable empirical_table(const FeatureTensor& t) {
  TruncationTable table;
  auto regions = empirical_regions(t);
  for (std::size_t k = 0; k < t.splits.size() && k < regions.size(); ++k) table.set(t.task, t.splits[k], regions[k]);
  return table;
}

struct QuantizedTensor {
  TaskKind task = TaskKind::Cls;
  std::vector<SplitPoint> splits;
  Shape shape;
  std::vector<std::uint16_t> codes;
  int bits = 10;
  std::vector<TruncationRegion> regions;  // one per split point
  std::string source_id;

  [[nodiscard]] std::uint32_t max_code() const noexcept { return (1u << bits) - 1u; }

  bool operator==(const QuantizedTensor&) const = default;
};

inline void check_bits(int bits) {
  if (bits < 8 || bits > 16) throw ValidationError("bit depth " + std::to_string(bits) + " outside [8, 16]");
}

inline void validate(const QuantizedTensor& q) {
  check_bits(q.bits);
  if (q.splits != expected_splits(q.task)) throw ValidationError("split tags do not match task");
  if (q.regions.size() != q.splits.size()) throw ValidationError("one truncation region per split point required");
  for (const auto& r : q.regions) check_region(r);
  if (q.shape.empty() || element_count(q.shape) != q.codes.size())
    throw ValidationError("element count: product(shape) does not match code count");
  const auto max = q.max_code();
  for (auto c : q.codes)
    if (c > max) throw ValidationError("code " + std::to_string(c) + " exceeds " + std::to_string(max));
}

inline double half_step(const TruncationRegion& r, int bits) {
  return r.width() / (2.0 * static_cast<double>((1u << bits) - 1u));
}

// Clamps into the region, then round((x - lo) / (hi - lo) * (2^bits - 1))
// with ties away from zero.
inline std::uint16_t quantize_value(double x, const TruncationRegion& r, int bits) {
  const double max = static_cast<double>((1u << bits) - 1u);
  const double y = (r.clamp(x) - r.lo) / r.width() * max;
  return static_cast<std::uint16_t>(std::clamp(std::round(y), 0.0, max));
}

inline double dequantize_value(std::uint32_t code, const TruncationRegion& r, int bits) {
  return r.lo + static_cast<double>(code) / static_cast<double>((1u << bits) - 1u) * r.width();
}

inline FeatureTensor truncate(const FeatureTensor& t, std::span<const TruncationRegion> regions) {
  SubTensorIndex idx(t.task, t.shape);
  if (regions.size() != idx.count()) throw ValidationError("one truncation region per sub-tensor required");
  FeatureTensor out = t;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = static_cast<float>(regions[idx(i)].clamp(out.data[i]));
  return out;
}

inline FeatureTensor truncate(const FeatureTensor& t, const TruncationTable& table) {
  return truncate(t, regions_for(t, table));
}

inline QuantizedTensor quantize_uniform(const FeatureTensor& t, std::span<const TruncationRegion> regions,
                                        int bits = 10) {
  check_bits(bits);
  SubTensorIndex idx(t.task, t.shape);
  if (regions.size() != idx.count()) throw ValidationError("one truncation region per sub-tensor required");
  for (const auto& r : regions) check_region(r);
  QuantizedTensor q{t.task, t.splits, t.shape, {}, bits, {regions.begin(), regions.end()}, t.source_id};
  q.codes.resize(t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) q.codes[i] = quantize_value(t.data[i], regions[idx(i)], bits);
  return q;
}

inline QuantizedTensor quantize_uniform(const FeatureTensor& t, const TruncationTable& table, int bits = 10) {
  return quantize_uniform(t, regions_for(t, table), bits);
}

inline FeatureTensor dequantize(const QuantizedTensor& q) {
  validate(q);
  SubTensorIndex idx(q.task, q.shape);
  FeatureTensor t{q.task, q.splits, q.shape, {}, q.source_id};
  t.data.resize(q.codes.size());
  for (std::size_t i = 0; i < q.codes.size(); ++i)
    t.data[i] = static_cast<float>(dequantize_value(q.codes[i], q.regions[idx(i)], q.bits));
  return t;
}

inline FeatureTensor normalize(const FeatureTensor& t, const TruncationTable& table) {
  auto regions = regions_for(t, table);
  SubTensorIndex idx(t.task, t.shape);
  FeatureTensor out = t;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const auto& r = regions[idx(i)];
    out.data[i] = static_cast<float>((static_cast<double>(out.data[i]) - r.lo) / r.width());
  }
  return out;
}

inline FeatureTensor denormalize(const FeatureTensor& t, const TruncationTable& table) {
  auto regions = regions_for(t, table);
  SubTensorIndex idx(t.task, t.shape);
  FeatureTensor out = t;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const auto& r = regions[idx(i)];
    out.data[i] = static_cast<float>(r.lo + static_cast<double>(out.data[i]) * r.width());
  }
  return out;
}

}  // namespace featcodec
