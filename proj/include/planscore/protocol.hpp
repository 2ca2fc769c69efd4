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
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "planscore/emerging.hpp"
#include "planscore/error.hpp"
#include "planscore/extract.hpp"
#include "planscore/features.hpp"
#include "planscore/gspan.hpp"
#include "planscore/mcs.hpp"
#include "planscore/regressor.hpp"
#include "planscore/scores.hpp"
#include "planscore/wet_area.hpp"

namespace planscore {

/// A support threshold given per 1,000 plans, scaled to the corpus at hand.
inline int scaled_support(int per_thousand, std::size_t corpus, bool scale = true) {
  if (!scale) return per_thousand;
  return std::max(2, static_cast<int>(std::lround(per_thousand * static_cast<double>(corpus) / 1000.0)));
}

struct PlanRecord {
  SegmentedRaster raster;
  RoomGraph room;
  LabeledGraph graph;

  const std::string& id() const { return raster.id; }
};

inline std::vector<PlanRecord> make_plan_records(const std::vector<SegmentedRaster>& rasters,
                                                 const ExtractOptions& extract = {}) {
  std::vector<PlanRecord> out;
  out.reserve(rasters.size());
  for (const auto& r : rasters) {
    auto room = build_graph(r, extract);
    auto g = to_labeled(room);
    out.push_back({r, std::move(room), std::move(g)});
  }
  return out;
}

/// Thresholds and options of the feature-fitting stages.
struct FitConfig {
  int mining_support = 5;  // per 1,000 plans when scaled
  int max_edges = 8;
  bool scale_thresholds = true;
  EmergingOptions emerging{10};  // min_support per 1,000 plans when scaled
  McsOptions mcs;
};

/// Everything fitted on one training split.
struct FittedFeatures {
  FeatureContext ctx;
  FeatureSchema schema;
  std::size_t mined_patterns = 0;
};

/// Fits mining, emerging vocabulary, wet vocabulary, reference set and
/// standardizers on the training plans only. `similarity` (optional) is a
/// row-major plans x plans MCS matrix; columns of training plans are read
/// from it instead of recomputing.
inline FittedFeatures fit_features(const std::vector<PlanRecord>& plans, const std::vector<std::size_t>& train,
                                   const ScoreTable& scores, const FitConfig& config,
                                   const std::vector<double>* similarity = nullptr) {
  if (train.size() < 2) throw Error(ErrorCode::kTooFewRows, "training split needs >= 2 plans");
  FittedFeatures f;
  std::vector<CorpusGraph> corpus;
  ScoreTable train_scores;
  std::vector<RoomGraph> rooms;
  for (auto i : train) {
    corpus.push_back({plans[i].id(), plans[i].graph});
    train_scores[plans[i].id()] = scores.at(plans[i].id());
    rooms.push_back(plans[i].room);
  }
  MiningOptions mo;
  mo.min_support = scaled_support(config.mining_support, train.size(), config.scale_thresholds);
  mo.max_edges = config.max_edges;
  const auto mined = gspan(corpus, mo);
  f.mined_patterns = mined.patterns.size();
  const auto patterns = pattern_records(mined, corpus);
  auto eo = config.emerging;
  eo.min_support = scaled_support(config.emerging.min_support, train.size(), config.scale_thresholds);
  f.ctx.emerging = build_emerging_vocabulary(patterns, train_scores, eo).vocabulary;
  try {
    f.ctx.wet = build_wet_vocab(rooms);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoWetRooms) throw;
  }
  for (auto i : train) {
    f.ctx.reference_ids.push_back(plans[i].id());
    f.ctx.reference_graphs.push_back(plans[i].graph);
  }
  f.ctx.mcs = config.mcs;
  std::vector<RawFeatures> raw;
  for (auto i : train) {
    auto r = raw_features(plans[i].id(), plans[i].graph, plans[i].raster, FeatureContext{f.ctx.emerging, f.ctx.wet, {}, {}, config.mcs});
    if (similarity) {
      for (auto j : train) r.mcs.push_back((*similarity)[i * plans.size() + j]);
    } else {
      r.mcs = similarity_vector(plans[i].graph, f.ctx.reference_graphs, config.mcs);
    }
    raw.push_back(std::move(r));
  }
  f.schema = fit_schema(f.ctx, raw);
  return f;
}

/// Bundles for the given plans under a fitted split.
inline std::vector<FeatureBundle> bundles_for(const std::vector<PlanRecord>& plans, const std::vector<std::size_t>& which,
                                              const std::vector<std::size_t>& train, const FittedFeatures& f,
                                              const std::vector<double>* similarity = nullptr) {
  std::vector<FeatureBundle> out;
  const FeatureContext no_refs{f.ctx.emerging, f.ctx.wet, {}, {}, f.ctx.mcs};
  for (auto i : which) {
    auto r = raw_features(plans[i].id(), plans[i].graph, plans[i].raster, no_refs);
    if (similarity) {
      for (auto j : train) r.mcs.push_back((*similarity)[i * plans.size() + j]);
    } else {
      r.mcs = similarity_vector(plans[i].graph, f.ctx.reference_graphs, f.ctx.mcs);
    }
    out.push_back(assemble(r, f.schema));
  }
  return out;
}

struct Split {
  std::vector<std::size_t> train, val, test;
};

/// Seeded 8:1:1 split; validation and test get round(n / 10) plans each.
inline Split split_811(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto tenth = static_cast<std::size_t>(std::lround(static_cast<double>(n) / 10.0));
  Split s;
  s.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(tenth));
  s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(tenth), order.begin() + static_cast<std::ptrdiff_t>(2 * tenth));
  s.train.assign(order.begin() + static_cast<std::ptrdiff_t>(2 * tenth), order.end());
  for (auto* v : {&s.train, &s.val, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

/// Pearson r where a constant or non-finite prediction series (a collapsed
/// or diverged model) counts as 0.
inline double pcc_or_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) return 0.0;
  try {
    return pcc(x, y);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kConstantSeries) throw;
    return 0.0;
  }
}

struct ProtocolConfig {
  int repeats = 5;
  std::uint64_t seed = 0;
  FitConfig fit;
  TrainConfig train;
  bool shuffle_labels = false;
};

struct SplitReport {
  std::uint64_t seed = 0;
  std::size_t mined_patterns = 0;
  std::size_t emerging_size = 0;
  std::size_t wet_size = 0;
  std::array<double, kScoreItemCount> pcc{};
};

struct ProtocolResult {
  std::vector<SplitReport> splits;
  std::array<double, kScoreItemCount> mean_pcc{};
  double overall = 0.0;

  Json to_json() const {
    Json j;
    for (int q = 0; q < kScoreItemCount; ++q) j["mean_pcc"][std::string(kScoreItemNames[q])] = mean_pcc[q];
    j["overall"] = overall;
    for (const auto& s : splits) {
      Json sj{{"seed", s.seed}, {"mined_patterns", s.mined_patterns}, {"emerging_size", s.emerging_size},
              {"wet_size", s.wet_size}};
      for (int q = 0; q < kScoreItemCount; ++q) sj["pcc"][std::string(kScoreItemNames[q])] = s.pcc[q];
      j["splits"].push_back(sj);
    }
    return j;
  }
};

/// Permutes which plan each score vector belongs to.
inline ScoreTable shuffled_scores(const ScoreTable& scores, std::uint64_t seed) {
  std::vector<ScoreVector> values;
  for (const auto& [id, s] : scores) values.push_back(s);
  std::mt19937_64 rng(seed);
  std::shuffle(values.begin(), values.end(), rng);
  ScoreTable out;
  std::size_t k = 0;
  for (const auto& [id, s] : scores) out[id] = values[k++];
  return out;
}

/// Repeated 8:1:1 resampling; per split everything is refitted on the
/// training plans and one model is trained per score item; reports mean
/// test PCC per item and overall.
inline ProtocolResult evaluate_protocol(const std::vector<PlanRecord>& plans, const ScoreTable& scores,
                                        const ProtocolConfig& config) {
  if (plans.size() < 20) throw Error(ErrorCode::kCorpusTooSmall, "protocol needs >= 20 plans");
  const ScoreTable labels = config.shuffle_labels ? shuffled_scores(scores, config.seed ^ 0xa5a5a5a5ull) : scores;
  for (const auto& p : plans) {
    if (!labels.count(p.id())) throw Error(ErrorCode::kMissingRatings, "no scores for " + p.id());
  }
  std::vector<LabeledGraph> graphs;
  for (const auto& p : plans) graphs.push_back(p.graph);
  const auto similarity = similarity_matrix(graphs, config.fit.mcs);

  ProtocolResult result;
  for (int rep = 0; rep < config.repeats; ++rep) {
    const std::uint64_t split_seed = config.seed + 1000003ull * static_cast<std::uint64_t>(rep);
    const auto split = split_811(plans.size(), split_seed);
    const auto fitted = fit_features(plans, split.train, labels, config.fit, &similarity);
    const auto train_rows = bundles_for(plans, split.train, split.train, fitted, &similarity);
    const auto val_rows = bundles_for(plans, split.val, split.train, fitted, &similarity);
    const auto test_rows = bundles_for(plans, split.test, split.train, fitted, &similarity);
    SplitReport report;
    report.seed = split_seed;
    report.mined_patterns = fitted.mined_patterns;
    report.emerging_size = fitted.ctx.emerging.size();
    report.wet_size = fitted.ctx.wet.size();
    auto targets = [&](const std::vector<std::size_t>& idx, int q) {
      std::vector<double> t;
      for (auto i : idx) t.push_back(labels.at(plans[i].id())[q]);
      return t;
    };
    for (int q = 0; q < kScoreItemCount; ++q) {
      auto tc = config.train;
      tc.seed = config.train.seed + split_seed * 31 + static_cast<std::uint64_t>(q);
      const auto model = train(train_rows, targets(split.train, q), val_rows, targets(split.val, q), tc);
      report.pcc[static_cast<std::size_t>(q)] = pcc_or_zero(predict(model.params, test_rows), targets(split.test, q));
    }
    result.splits.push_back(report);
  }
  double total = 0.0;
  for (int q = 0; q < kScoreItemCount; ++q) {
    double s = 0.0;
    for (const auto& r : result.splits) s += r.pcc[static_cast<std::size_t>(q)];
    result.mean_pcc[static_cast<std::size_t>(q)] = s / static_cast<double>(result.splits.size());
    total += result.mean_pcc[static_cast<std::size_t>(q)];
  }
  result.overall = total / kScoreItemCount;
  return result;
}

}  // namespace planscore
