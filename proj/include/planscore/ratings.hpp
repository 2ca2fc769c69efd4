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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "planscore/error.hpp"
#include "planscore/scores.hpp"
#include "planscore/synth.hpp"

namespace planscore {

struct RatingRecord {
  std::string participant_id;
  std::string plan_id;
  int question = 1;  // 1..9
  int raw = 3;       // 1..5
  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

struct StandardizedRecord {
  RatingRecord record;
  double z = 0.0;
};

struct RaterProfile {
  std::string participant_id;
  double bias = 3.0;
  double scale = 1.0;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
};

struct PanelSpec {
  int raters_per_plan = 20;
  int block_size = 25;
  double bias_min = 2.4;
  double bias_max = 3.6;
  double scale_min = 1.0;
  double scale_max = 1.8;
  double noise_sd = 0.0;
  double straightliner_fraction = 0.05;
};

/// Enough raters for every plan to be rated about `raters_per_plan` times
/// when each rater takes one block of `block_size` plans.
inline std::vector<RaterProfile> make_panel(int plan_count, const PanelSpec& spec, std::uint64_t seed) {
  const int block = std::max(1, std::min(spec.block_size, plan_count));
  const int raters = std::max(1, (plan_count * spec.raters_per_plan + block - 1) / block);
  auto rng = derived_rng(seed, 0x9a9e1ull);
  std::uniform_real_distribution<double> bias(spec.bias_min, spec.bias_max);
  std::uniform_real_distribution<double> scale(spec.scale_min, spec.scale_max);
  std::bernoulli_distribution straight(spec.straightliner_fraction);
  std::vector<RaterProfile> panel;
  for (int i = 0; i < raters; ++i) {
    RaterProfile p;
    p.participant_id = "u" + std::to_string(100000 + i).substr(1);
    p.bias = bias(rng);
    const bool flat = straight(rng);
    p.scale = flat ? 1e-9 : scale(rng);
    p.noise_sd = flat ? 0.0 : spec.noise_sd;
    p.seed = rng();
    panel.push_back(p);
  }
  return panel;
}

inline int rate(const RaterProfile& rater, double truth, std::mt19937_64& rng) {
  double value = rater.scale * truth + rater.bias;
  if (rater.noise_sd > 0.0) value += std::normal_distribution<double>(0.0, rater.noise_sd)(rng);
  return static_cast<int>(std::clamp(std::round(value), 1.0, 5.0));
}

/// Every rater rates a contiguous block (wrapping) of a seeded shuffle of
/// the plans on all nine questions.
inline std::vector<RatingRecord> simulate_ratings(const std::vector<SegmentedRaster>& plans,
                                                  const HiddenScoreModel& hidden,
                                                  const std::vector<RaterProfile>& raters, int block_size = 25,
                                                  std::uint64_t seed = 0) {
  if (plans.empty() || raters.empty()) throw Error(ErrorCode::kMissingRatings, "need at least one plan and rater");
  for (const auto& r : raters) {
    if (!(r.scale > 0.0) || r.noise_sd < 0.0) throw Error(ErrorCode::kInvalidWeight, "rater " + r.participant_id);
  }
  const int n = static_cast<int>(plans.size());
  std::vector<std::array<double, kQuestionCount>> truth;
  truth.reserve(plans.size());
  for (const auto& p : plans) truth.push_back(hidden.truth(p));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto shuffle_rng = derived_rng(seed, 0x5b0ffull);
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  const int block = std::max(1, std::min(block_size, n));
  std::vector<RatingRecord> out;
  for (std::size_t r = 0; r < raters.size(); ++r) {
    const auto& rater = raters[r];
    std::mt19937_64 rng(rater.seed);
    const int start = static_cast<int>((r * static_cast<std::size_t>(block)) % static_cast<std::size_t>(n));
    for (int k = 0; k < block; ++k) {
      const int plan = order[(start + k) % n];
      for (int q = 0; q < kQuestionCount; ++q) {
        out.push_back({rater.participant_id, plans[plan].id, q + 1, rate(rater, truth[plan][q], rng)});
      }
    }
  }
  return out;
}

/// Drops every participant whose raw ratings are all identical.
inline std::vector<RatingRecord> remove_straightliners(const std::vector<RatingRecord>& records) {
  std::map<std::string, std::set<int>> distinct;
  for (const auto& r : records) distinct[r.participant_id].insert(r.raw);
  std::vector<RatingRecord> out;
  for (const auto& r : records) {
    if (distinct[r.participant_id].size() > 1) out.push_back(r);
  }
  return out;
}

/// z-scores of one participant's records (population standard deviation).
inline std::vector<StandardizedRecord> standardize_participant(const std::vector<RatingRecord>& records) {
  if (records.empty()) return {};
  double mean = 0.0;
  for (const auto& r : records) mean += r.raw;
  mean /= static_cast<double>(records.size());
  double var = 0.0;
  for (const auto& r : records) var += (r.raw - mean) * (r.raw - mean);
  var /= static_cast<double>(records.size());
  if (var <= 0.0) throw Error(ErrorCode::kZeroVariance, "participant " + records.front().participant_id);
  const double sd = std::sqrt(var);
  std::vector<StandardizedRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r, (r.raw - mean) / sd});
  return out;
}

/// Groups by participant (sorted by id) and standardizes each group.
inline std::vector<StandardizedRecord> standardize_all(const std::vector<RatingRecord>& records) {
  std::map<std::string, std::vector<RatingRecord>> by_participant;
  for (const auto& r : records) by_participant[r.participant_id].push_back(r);
  std::vector<StandardizedRecord> out;
  for (const auto& [id, group] : by_participant) {
    auto z = standardize_participant(group);
    out.insert(out.end(), z.begin(), z.end());
  }
  return out;
}

/// z-score then min-max onto [-1, 1]; all-equal input maps to 0.
inline std::vector<double> normalize_unit_range(const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (var <= 0.0) return out;
  const double sd = std::sqrt(var);
  std::vector<double> z;
  z.reserve(values.size());
  for (double v : values) z.push_back((v - mean) / sd);
  const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
  const double min = *lo;
  const double max = *hi;
  if (!(max > min)) return out;
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::clamp(2.0 * (z[i] - min) / (max - min) - 1.0, -1.0, 1.0);
  return out;
}

/// Per plan and question: mean z over participants, then per question
/// normalized across plans. Total is left at 0; see `total_score`.
inline ScoreTable aggregate_scores(const std::vector<StandardizedRecord>& records,
                                   const std::vector<std::string>& plan_ids) {
  std::map<std::string, std::array<std::pair<double, int>, kQuestionCount>> acc;
  for (const auto& id : plan_ids) acc[id] = {};
  for (const auto& s : records) {
    auto it = acc.find(s.record.plan_id);
    if (it == acc.end()) continue;
    auto& cell = it->second[static_cast<std::size_t>(s.record.question - 1)];
    cell.first += s.z;
    ++cell.second;
  }
  ScoreTable table;
  for (int q = 0; q < kQuestionCount; ++q) {
    std::vector<double> means;
    for (const auto& [id, cells] : acc) {
      const auto& cell = cells[static_cast<std::size_t>(q)];
      if (cell.second == 0) {
        throw Error(ErrorCode::kMissingRatings, "plan " + id + " has no ratings for Q" + std::to_string(q + 1));
      }
      means.push_back(cell.first / cell.second);
    }
    const auto normalized = normalize_unit_range(means);
    std::size_t i = 0;
    for (const auto& [id, cells] : acc) table[id][q] = normalized[i++];
  }
  return table;
}

/// Fills in Total: mean of Q1..Q9 per plan, normalized across plans.
inline void total_score(ScoreTable& table) {
  std::vector<double> means;
  for (const auto& [id, s] : table) {
    double m = 0.0;
    for (int q = 0; q < kQuestionCount; ++q) m += s[q];
    means.push_back(m / kQuestionCount);
  }
  const auto normalized = normalize_unit_range(means);
  std::size_t i = 0;
  for (auto& [id, s] : table) s[kTotalIndex] = normalized[i++];
}

/// The full aggregation: straight-liner removal, per-participant
/// standardization, per-question aggregation and the Total.
inline ScoreTable aggregate_ratings(const std::vector<RatingRecord>& records, const std::vector<std::string>& plan_ids) {
  auto table = aggregate_scores(standardize_all(remove_straightliners(records)), plan_ids);
  total_score(table);
  return table;
}

inline std::string write_ratings_csv(const std::vector<RatingRecord>& records) {
  std::string out = "participant_id,plan_id,question,raw\n";
  for (const auto& r : records) {
    out += r.participant_id + "," + r.plan_id + ",Q" + std::to_string(r.question) + "," + std::to_string(r.raw) + "\n";
  }
  return out;
}

inline std::vector<RatingRecord> read_ratings_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<RatingRecord> out;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1) {
      if (line != "participant_id,plan_id,question,raw") throw Error(ErrorCode::kMalformedEntry, "ratings header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const auto bad = Error(ErrorCode::kMalformedEntry, "ratings line " + std::to_string(number));
    if (fields.size() != 4 || fields[2].size() != 2 || fields[2][0] != 'Q') throw bad;
    RatingRecord r{fields[0], fields[1], fields[2][1] - '0', 0};
    if (r.question < 1 || r.question > 9 || fields[3].size() != 1) throw bad;
    r.raw = fields[3][0] - '0';
    if (r.raw < 1 || r.raw > 5) throw bad;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace planscore
