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
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featcodec {

// Downstream task a feature was extracted for. The numeric values are the
// on-disk task codes of the FTEN container.
enum class TaskKind : std::uint8_t { Cls = 0, Seg = 1, Dpt = 2, CSR = 3, TTI = 4 };

// Split point a (sub-)tensor was captured at. Values are FTEN split codes.
enum class SplitPoint : std::uint8_t { DS = 0, DM1 = 1, DM2 = 2, DM3 = 3, DM4 = 4, G = 5, H = 6 };

inline constexpr std::array<TaskKind, 5> kAllTasks = {TaskKind::Cls, TaskKind::Seg, TaskKind::Dpt,
                                                      TaskKind::CSR, TaskKind::TTI};

constexpr std::string_view to_string(TaskKind t) noexcept {
  switch (t) {
    case TaskKind::Cls: return "cls";
    case TaskKind::Seg: return "seg";
    case TaskKind::Dpt: return "dpt";
    case TaskKind::CSR: return "csr";
    case TaskKind::TTI: return "tti";
  }
  return "?";
}

constexpr std::string_view to_string(SplitPoint s) noexcept {
  switch (s) {
    case SplitPoint::DS: return "SP_DS";
    case SplitPoint::DM1: return "SP_DM1";
    case SplitPoint::DM2: return "SP_DM2";
    case SplitPoint::DM3: return "SP_DM3";
    case SplitPoint::DM4: return "SP_DM4";
    case SplitPoint::G: return "SP_G";
    case SplitPoint::H: return "SP_H";
  }
  return "?";
}

namespace detail {
inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}
}  // namespace detail

inline std::optional<TaskKind> parse_task(std::string_view s) {
  const auto l = detail::lower(s);
  for (auto t : kAllTasks)
    if (l == to_string(t)) return t;
  return std::nullopt;
}

inline std::optional<SplitPoint> parse_split(std::string_view s) {
  const auto l = detail::lower(s);
  for (std::uint8_t i = 0; i <= 6; ++i) {
    auto sp = static_cast<SplitPoint>(i);
    auto name = detail::lower(to_string(sp));
    if (l == name || l == name.substr(3)) return sp;
  }
  return std::nullopt;
}

constexpr bool is_valid_task_code(std::uint8_t v) noexcept { return v <= 4; }
constexpr bool is_valid_split_code(std::uint8_t v) noexcept { return v <= 6; }

// Split-point tags a feature of the given task carries, in sub-tensor order.
inline std::vector<SplitPoint> expected_splits(TaskKind t) {
  switch (t) {
    case TaskKind::Cls:
    case TaskKind::Seg: return {SplitPoint::DS};
    case TaskKind::Dpt: return {SplitPoint::DM1, SplitPoint::DM2, SplitPoint::DM3, SplitPoint::DM4};
    case TaskKind::CSR: return {SplitPoint::G};
    case TaskKind::TTI: return {SplitPoint::H};
  }
  return {};
}

}  // namespace featcodec
