// Copyright 2026 The planscore Authors
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

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "planscore/error.hpp"
#include "planscore/raster.hpp"

namespace planscore {

/// Score items: nine questionnaire questions plus the derived Total.
inline constexpr int kQuestionCount = 9;
inline constexpr int kScoreItemCount = 10;
inline constexpr int kTotalIndex = 9;

inline constexpr std::array<std::string_view, kScoreItemCount> kScoreItemNames = {
    "Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9", "Total"};

inline std::optional<int> score_item_from_name(std::string_view name) {
  for (int i = 0; i < kScoreItemCount; ++i) {
    if (kScoreItemNames[i] == name) return i;
  }
  return std::nullopt;
}

/// Q1..Q9 at indices 0..8, Total at index 9; every value in [-1, 1].
struct ScoreVector {
  std::array<double, kScoreItemCount> values{};

  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

  bool valid() const {
    for (double v : values) {
      if (!std::isfinite(v) || v < -1.0 || v > 1.0) return false;
    }
    return true;
  }
  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;
};

using ScoreTable = std::map<std::string, ScoreVector>;

inline Json score_vector_to_json(const ScoreVector& s) {
  Json j = Json::object();
  for (int i = 0; i < kScoreItemCount; ++i) j[std::string(kScoreItemNames[i])] = s[i];
  return j;
}

/// `in_range` rejects values outside [-1, 1]; predictions are not clamped.
inline ScoreVector score_vector_from_json(const Json& j, bool in_range = true) {
  ScoreVector s;
  for (int i = 0; i < kScoreItemCount; ++i) {
    const auto key = std::string(kScoreItemNames[i]);
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw Error(ErrorCode::kMalformedJson, "score vector missing " + key);
    }
    s[i] = j.at(key).get<double>();
  }
  if (in_range && !s.valid()) throw Error(ErrorCode::kMalformedJson, "score outside [-1, 1]");
  return s;
}

/// One {"plan_id":..., "scores":{...}} object per line, ordered by plan id.
inline std::string write_scores_jsonl(const ScoreTable& table) {
  std::string out;
  for (const auto& [id, s] : table) {
    out += Json{{"plan_id", id}, {"scores", score_vector_to_json(s)}}.dump();
    out += '\n';
  }
  return out;
}

inline ScoreTable read_scores_jsonl(std::string_view text, bool in_range = true) {
  ScoreTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const auto j = parse_json(line, "scores line " + std::to_string(number));
      table[j.at("plan_id").get<std::string>()] = score_vector_from_json(j.at("scores"), in_range);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kMalformedJson, "scores line " + std::to_string(number) + ": " + e.what());
    }
  }
  return table;
}

}  // namespace planscore
