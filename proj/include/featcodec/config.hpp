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

// Toolkit configuration: truncation table, QP ladder and per-task baseline
// accuracies. Resolution order: explicit path, then $FEATCODEC_CONFIG, then
// built-in defaults.

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "featcodec/byte_io.hpp"
#include "featcodec/errors.hpp"
#include "featcodec/intra_codec.hpp"
#include "featcodec/preprocess.hpp"
#include "json.hpp"

namespace featcodec {

inline constexpr const char* kConfigEnv = "FEATCODEC_CONFIG";

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

// Accepts either a bare table or an object with a "truncation" member.
inline TruncationTable load_truncation_table(const std::filesystem::path& path) {
  auto j = parse_json_file(path);
  if (j.is_object() && j.contains("truncation")) return TruncationTable::from_json(j["truncation"]);
  return TruncationTable::from_json(j);
}

struct Config {
  TruncationTable truncation = TruncationTable::vtm();
  std::vector<int> qp_ladder{kQpLadder.begin(), kQpLadder.end()};
  std::map<TaskKind, double> baselines;

  static Config from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    Config c;
    try {
      if (j.contains("truncation")) c.truncation = TruncationTable::from_json(j["truncation"]);
      if (j.contains("qp_ladder")) {
        c.qp_ladder = j["qp_ladder"].get<std::vector<int>>();
        for (int qp : c.qp_ladder)
          if (qp < 0 || qp > 51) throw ValidationError("config: qp " + std::to_string(qp) + " outside [0, 51]");
      }
      if (j.contains("baselines"))
        for (const auto& [name, v] : j["baselines"].items()) {
          auto task = parse_task(name);
          if (!task) throw ValidationError("config: unknown task '" + name + "' in baselines");
          c.baselines[*task] = v.get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
  }

  static Config load(const std::filesystem::path& path) { return from_json(parse_json_file(path)); }

  static Config resolve(const std::optional<std::filesystem::path>& explicit_path = std::nullopt) {
    if (explicit_path) return load(*explicit_path);
    if (const char* env = std::getenv(kConfigEnv); env && *env) return load(env);
    return {};
  }
};

}  // namespace featcodec
