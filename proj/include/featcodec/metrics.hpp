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

// Rate and accuracy bookkeeping: bits per feature point, feature MSE,
// accuracy drop, rate-accuracy curves and the coefficient of determination
// between feature MSE and task accuracy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "featcodec/errors.hpp"
#include "featcodec/feature_io.hpp"
#include "json.hpp"

namespace featcodec {

enum class AccuracyKind { Percent, MIoU, RMSE, ClipScore };

constexpr std::string_view to_string(AccuracyKind k) noexcept {
  switch (k) {
    case AccuracyKind::Percent: return "percent";
    case AccuracyKind::MIoU: return "miou";
    case AccuracyKind::RMSE: return "rmse";
    case AccuracyKind::ClipScore: return "clip_score";
  }
  return "?";
}

inline std::optional<AccuracyKind> parse_accuracy_kind(std::string_view s) {
  const auto l = detail::lower(s);
  for (auto k : {AccuracyKind::Percent, AccuracyKind::MIoU, AccuracyKind::RMSE, AccuracyKind::ClipScore})
    if (l == to_string(k)) return k;
  if (l == "accuracy" || l == "acc") return AccuracyKind::Percent;
  if (l == "clip") return AccuracyKind::ClipScore;
  return std::nullopt;
}

// Accuracy metric each task is scored with.
constexpr AccuracyKind default_accuracy_kind(TaskKind t) noexcept {
  switch (t) {
    case TaskKind::Seg: return AccuracyKind::MIoU;
    case TaskKind::Dpt: return AccuracyKind::RMSE;
    case TaskKind::TTI: return AccuracyKind::ClipScore;
    default: return AccuracyKind::Percent;
  }
}

// Total bits divided by the element count of the original (unpacked,
// unpadded) feature.
inline double bpfp(std::uint64_t total_bits, std::span<const std::uint32_t> original_shape) {
  auto n = checked_element_count(original_shape);
  if (!n || *n == 0) throw ValidationError("bpfp: original shape must be non-empty with positive extents");
  return static_cast<double>(total_bits) / static_cast<double>(*n);
}

inline double feature_mse(const FeatureTensor& a, const FeatureTensor& b) {
  if (a.shape != b.shape)
    throw ValidationError("feature_mse: shape mismatch " + shape_to_string(a.shape) + " vs " + shape_to_string(b.shape));
  if (a.data.size() != b.data.size()) throw ValidationError("feature_mse: element count mismatch");
  if (a.data.empty()) throw ValidationError("feature_mse: empty tensors");
  double sum = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = double(a.data[i]) - double(b.data[i]);
    sum += d * d;
  }
  return sum / double(a.data.size());
}

// Percentage decrease in accuracy. RMSE is an error, so its reciprocal is
// treated as the accuracy: drop = 100 * (1 - baseline / achieved).
inline double accuracy_drop(double baseline, double achieved, AccuracyKind kind) {
  if (!(baseline > 0)) throw ValidationError("accuracy_drop: baseline must be positive");
  if (kind == AccuracyKind::RMSE) {
    if (!(achieved > 0)) throw ValidationError("accuracy_drop: RMSE must be positive");
    return 100.0 * (1.0 - baseline / achieved);
  }
  return 100.0 * (baseline - achieved) / baseline;
}

// Squared Pearson correlation.
inline double r_squared(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("r_squared: length mismatch");
  if (xs.size() < 2) throw ValidationError("r_squared: at least two points required");
  const double n = double(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw ValidationError("r_squared: zero-variance input");
  return (sxy * sxy) / (sxx * syy);
}

struct RDRecord {
  TaskKind task = TaskKind::Cls;
  std::string label;
  std::uint64_t total_bits = 0;
  std::uint64_t feature_points = 0;
  double bpfp = 0;
  double mse = 0;
  std::optional<double> accuracy;
  AccuracyKind accuracy_kind = AccuracyKind::Percent;
  std::optional<double> drop;  // filled by build_curve when a baseline is known
};

inline RDRecord make_record(TaskKind task, std::string label, std::uint64_t total_bits,
                            std::span<const std::uint32_t> original_shape, double mse,
                            std::optional<double> accuracy = std::nullopt,
                            std::optional<AccuracyKind> kind = std::nullopt) {
  if (!(mse >= 0)) throw ValidationError("record '" + label + "': mse must be non-negative");
  RDRecord r;
  r.task = task;
  r.label = std::move(label);
  r.total_bits = total_bits;
  r.feature_points = element_count(original_shape);
  r.bpfp = bpfp(total_bits, original_shape);
  r.mse = mse;
  r.accuracy = accuracy;
  r.accuracy_kind = kind.value_or(default_accuracy_kind(task));
  return r;
}

struct RDCurve {
  TaskKind task = TaskKind::Cls;
  AccuracyKind accuracy_kind = AccuracyKind::Percent;
  std::vector<RDRecord> records;  // bpfp descending
  std::optional<double> baseline_accuracy;

  // R^2 between MSE and accuracy over records that carry an accuracy;
  // nullopt when fewer than two such records exist.
  [[nodiscard]] std::optional<double> mse_accuracy_r2() const {
    std::vector<double> xs, ys;
    for (const auto& r : records)
      if (r.accuracy) {
        xs.push_back(r.mse);
        ys.push_back(*r.accuracy);
      }
    if (xs.size() < 2) return std::nullopt;
    return r_squared(xs, ys);
  }
};

inline RDCurve build_curve(std::vector<RDRecord> records, std::optional<double> baseline = std::nullopt) {
  if (records.empty()) throw ValidationError("build_curve: at least one record required");
  RDCurve curve;
  curve.task = records.front().task;
  curve.accuracy_kind = records.front().accuracy_kind;
  curve.baseline_accuracy = baseline;
  for (const auto& r : records) {
    if (r.task != curve.task) throw ValidationError("build_curve: records mix tasks");
    if (r.accuracy_kind != curve.accuracy_kind) throw ValidationError("build_curve: records mix accuracy kinds");
  }
  std::stable_sort(records.begin(), records.end(), [](const RDRecord& a, const RDRecord& b) { return a.bpfp > b.bpfp; });
  for (auto& r : records)
    r.drop = (baseline && r.accuracy) ? std::optional(accuracy_drop(*baseline, *r.accuracy, r.accuracy_kind)) : std::nullopt;
  curve.records = std::move(records);
  return curve;
}

// Column order: label,bpfp,mse,accuracy,drop. Missing values are empty cells.
inline std::string curve_csv(const RDCurve& curve) {
  std::ostringstream os;
  os << "label,bpfp,mse,accuracy,drop\n";
  os << std::setprecision(10);
  for (const auto& r : curve.records) {
    os << r.label << ',' << r.bpfp << ',' << r.mse << ',';
    if (r.accuracy) os << *r.accuracy;
    os << ',';
    if (r.drop) os << *r.drop;
    os << '\n';
  }
  return os.str();
}

namespace detail {
inline std::optional<TaskKind> infer_task(std::span<const std::uint32_t> shape) {
  std::optional<TaskKind> found;
  for (auto t : kAllTasks)
    if (!shape_family_violation(t, shape, ShapePolicy::Canonical)) {
      if (found) return std::nullopt;
      found = t;
    }
  return found;
}
}  // namespace detail

// Records file: JSON array of
//   {"task"?, "label", "total_bits" | "bpfp", "shape", "mse", "accuracy"?, "accuracy_kind"?}
// "task" may be omitted when the shape identifies it. When only "bpfp" is
// given, total_bits is reconstructed as round(bpfp * product(shape)).
inline std::vector<RDRecord> records_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("records file must hold a JSON array");
  std::vector<RDRecord> out;
  std::size_t index = 0;
  for (const auto& e : j) {
    const std::string where = "record " + std::to_string(index++);
    try {
      const auto shape = e.at("shape").get<Shape>();
      std::optional<TaskKind> task;
      if (e.contains("task")) {
        task = parse_task(e["task"].get<std::string>());
        if (!task) throw ValidationError(where + ": unknown task");
      } else {
        task = detail::infer_task(shape);
        if (!task) throw ValidationError(where + ": task missing and not inferable from shape");
      }
      const auto points = element_count(shape);
      if (points == 0) throw ValidationError(where + ": empty shape");
      std::uint64_t bits = 0;
      if (e.contains("total_bits")) {
        const auto& tb = e["total_bits"];
        if (tb.is_number_integer() ? tb.get<std::int64_t>() < 0 : true)
          throw ValidationError(where + ": total_bits must be a non-negative integer");
        bits = tb.get<std::uint64_t>();
      } else if (e.contains("bpfp")) {
        const double b = e["bpfp"].get<double>();
        if (!(b >= 0)) throw ValidationError(where + ": bpfp must be non-negative");
        bits = static_cast<std::uint64_t>(std::llround(b * double(points)));
      } else {
        throw ValidationError(where + ": total_bits or bpfp required");
      }
      std::optional<AccuracyKind> kind;
      if (e.contains("accuracy_kind")) {
        kind = parse_accuracy_kind(e["accuracy_kind"].get<std::string>());
        if (!kind) throw ValidationError(where + ": unknown accuracy_kind");
      }
      std::optional<double> acc;
      if (e.contains("accuracy") && !e["accuracy"].is_null()) acc = e["accuracy"].get<double>();
      std::string label = e.contains("label") ? (e["label"].is_string() ? e["label"].get<std::string>() : e["label"].dump())
                                              : std::to_string(index - 1);
      out.push_back(make_record(*task, label, bits, shape, e.at("mse").get<double>(), acc, kind));
    } catch (const nlohmann::json::exception& ex) {
      throw ValidationError(where + ": " + ex.what());
    }
  }
  return out;
}

// Groups records by task, keeping first-seen task order.
inline std::vector<std::vector<RDRecord>> group_by_task(const std::vector<RDRecord>& records) {
  std::vector<std::vector<RDRecord>> groups;
  for (const auto& r : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.front().task == r.task; });
    if (it == groups.end())
      groups.push_back({r});
    else
      it->push_back(r);
  }
  return groups;
}

}  // namespace featcodec
