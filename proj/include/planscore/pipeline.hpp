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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "planscore/emerging.hpp"
#include "planscore/error.hpp"
#include "planscore/extract.hpp"
#include "planscore/features.hpp"
#include "planscore/gspan.hpp"
#include "planscore/hash.hpp"
#include "planscore/io.hpp"
#include "planscore/protocol.hpp"
#include "planscore/ratings.hpp"
#include "planscore/regressor.hpp"
#include "planscore/scores.hpp"
#include "planscore/search.hpp"
#include "planscore/server.hpp"
#include "planscore/synth.hpp"
#include "planscore/wet_area.hpp"

namespace planscore {

namespace fs = std::filesystem;

/// Every tunable of the pipeline with its default. Thresholds marked
/// "per 1,000 plans" are rescaled to the training split size.
inline Json default_pipeline_config() {
  return Json::parse(R"({
    "workdir": "work",
    "corpus": {"count": 200, "seed": 42},
    "scores": {"planted_strength": 1.5, "noise_sd": 0.0, "seed": 42},
    "ratings": {"raters_per_plan": 20, "block_size": 25, "noise_sd": 0.0,
                "straightliner_fraction": 0.05, "seed": 42},
    "extract": {"min_room_cells": 2},
    "mining": {"min_support": 5, "max_edges": 8, "scale_thresholds": true},
    "emerging": {"min_support": 10, "mean_gate": 0.25, "ratio_gate": 4.0, "top_k": 20,
                 "band_fraction": 0.1},
    "mcs": {"node_cap": 12, "step_budget": 200000},
    "split": {"seed": 0},
    "train": {"batch_size": 20, "lr": 0.001, "decay": 2.86e-5, "momentum": 0.9, "epochs": 35,
              "seed": 0, "hidden": 256, "slope": 0.01, "dropout": 0.5},
    "evaluate": {"repeats": 5, "seed": 0},
    "serve": {"host": "127.0.0.1", "port": 8080, "static_dir": ""}
  })");
}

struct PipelineConfig {
  Json raw;  // fully resolved, defaults filled in
  fs::path workdir;

  int corpus_count = 200;
  std::uint64_t corpus_seed = 42;
  double planted_strength = 1.5;
  double score_noise = 0.0;
  std::uint64_t score_seed = 42;
  PanelSpec panel;
  std::uint64_t rating_seed = 42;
  ExtractOptions extract;
  FitConfig fit;
  std::uint64_t split_seed = 0;
  TrainConfig train;
  int eval_repeats = 5;
  std::uint64_t eval_seed = 0;
  ServerOptions serve;

  Json section(const std::string& name) const { return raw.at(name); }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) {
  throw Error(ErrorCode::kStageFailure, "config: " + msg);
}

inline void merge_config(Json& base, const Json& over, const std::string& prefix) {
  if (!over.is_object()) config_error(prefix.empty() ? "top level must be an object" : prefix + " must be an object");
  for (const auto& [key, value] : over.items()) {
    const auto path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) config_error("unknown key " + path);
    auto& slot = base[key];
    if (slot.is_object()) {
      merge_config(slot, value, path);
    } else if (slot.is_number() != value.is_number() || slot.is_boolean() != value.is_boolean() ||
               slot.is_string() != value.is_string()) {
      config_error(path + " has the wrong type");
    } else {
      slot = value;
    }
  }
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) config_error(msg);
}

}  // namespace detail

/// Resolves `overrides` against the defaults and validates ranges.
/// Relative workdirs are taken relative to `base`.
inline PipelineConfig make_pipeline_config(const Json& overrides, const fs::path& base = {}) {
  PipelineConfig c;
  c.raw = default_pipeline_config();
  detail::merge_config(c.raw, overrides, "");
  const auto& j = c.raw;
  using detail::require;
  try {
    c.workdir = j["workdir"].get<std::string>();
    if (c.workdir.is_relative() && !base.empty()) c.workdir = base / c.workdir;

    c.corpus_count = j["corpus"]["count"].get<int>();
    c.corpus_seed = j["corpus"]["seed"].get<std::uint64_t>();
    require(c.corpus_count >= 20, "corpus.count must be >= 20");

    c.planted_strength = j["scores"]["planted_strength"].get<double>();
    c.score_noise = j["scores"]["noise_sd"].get<double>();
    c.score_seed = j["scores"]["seed"].get<std::uint64_t>();
    require(c.score_noise >= 0.0, "scores.noise_sd must be >= 0");

    const auto& r = j["ratings"];
    c.panel.raters_per_plan = r["raters_per_plan"].get<int>();
    c.panel.block_size = r["block_size"].get<int>();
    c.panel.noise_sd = r["noise_sd"].get<double>();
    c.panel.straightliner_fraction = r["straightliner_fraction"].get<double>();
    c.rating_seed = r["seed"].get<std::uint64_t>();
    require(c.panel.raters_per_plan >= 1, "ratings.raters_per_plan must be >= 1");
    require(c.panel.block_size >= 1, "ratings.block_size must be >= 1");
    require(c.panel.noise_sd >= 0.0, "ratings.noise_sd must be >= 0");
    require(c.panel.straightliner_fraction >= 0.0 && c.panel.straightliner_fraction < 1.0,
            "ratings.straightliner_fraction must be in [0, 1)");

    c.extract.min_room_cells = j["extract"]["min_room_cells"].get<int>();
    require(c.extract.min_room_cells >= 1, "extract.min_room_cells must be >= 1");

    c.fit.mining_support = j["mining"]["min_support"].get<int>();
    c.fit.max_edges = j["mining"]["max_edges"].get<int>();
    c.fit.scale_thresholds = j["mining"]["scale_thresholds"].get<bool>();
    require(c.fit.mining_support >= 1, "mining.min_support must be >= 1");
    require(c.fit.max_edges >= 1, "mining.max_edges must be >= 1");

    const auto& e = j["emerging"];
    c.fit.emerging.min_support = e["min_support"].get<int>();
    c.fit.emerging.mean_gate = e["mean_gate"].get<double>();
    c.fit.emerging.ratio_gate = e["ratio_gate"].get<double>();
    c.fit.emerging.top_k = e["top_k"].get<int>();
    c.fit.emerging.band_fraction = e["band_fraction"].get<double>();
    require(c.fit.emerging.min_support >= 1, "emerging.min_support must be >= 1");
    require(c.fit.emerging.mean_gate >= 0.0, "emerging.mean_gate must be >= 0");
    require(c.fit.emerging.ratio_gate >= 1.0, "emerging.ratio_gate must be >= 1");
    require(c.fit.emerging.top_k >= 1, "emerging.top_k must be >= 1");
    require(c.fit.emerging.band_fraction > 0.0 && c.fit.emerging.band_fraction <= 0.5,
            "emerging.band_fraction must be in (0, 0.5]");

    c.fit.mcs.node_cap = j["mcs"]["node_cap"].get<int>();
    c.fit.mcs.step_budget = j["mcs"]["step_budget"].get<std::int64_t>();
    require(c.fit.mcs.node_cap >= 1 && c.fit.mcs.step_budget >= 1, "mcs limits must be >= 1");

    c.split_seed = j["split"]["seed"].get<std::uint64_t>();

    const auto& t = j["train"];
    c.train.batch_size = t["batch_size"].get<int>();
    c.train.lr = t["lr"].get<double>();
    c.train.decay = t["decay"].get<double>();
    c.train.momentum = t["momentum"].get<double>();
    c.train.epochs = t["epochs"].get<int>();
    c.train.seed = t["seed"].get<std::uint64_t>();
    c.train.model.hidden = t["hidden"].get<int>();
    c.train.model.slope = t["slope"].get<double>();
    c.train.model.dropout = t["dropout"].get<double>();
    require(c.train.batch_size >= 2, "train.batch_size must be >= 2");
    require(c.train.lr >= 0.0 && c.train.decay >= 0.0, "train.lr and train.decay must be >= 0");
    require(c.train.momentum >= 0.0 && c.train.momentum < 1.0, "train.momentum must be in [0, 1)");
    require(c.train.epochs >= 1, "train.epochs must be >= 1");
    require(c.train.model.hidden >= 1, "train.hidden must be >= 1");
    require(c.train.model.dropout >= 0.0 && c.train.model.dropout < 1.0, "train.dropout must be in [0, 1)");

    c.eval_repeats = j["evaluate"]["repeats"].get<int>();
    c.eval_seed = j["evaluate"]["seed"].get<std::uint64_t>();
    require(c.eval_repeats >= 1, "evaluate.repeats must be >= 1");

    c.serve.host = j["serve"]["host"].get<std::string>();
    c.serve.port = j["serve"]["port"].get<int>();
    c.serve.static_dir = j["serve"]["static_dir"].get<std::string>();
    require(c.serve.port >= 0 && c.serve.port <= 65535, "serve.port out of range");
  } catch (const Json::exception& ex) {
    detail::config_error(ex.what());
  }
  return c;
}

inline PipelineConfig load_pipeline_config(const fs::path& path) {
  Json j;
  try {
    j = parse_json(read_file(path), "config");
  } catch (const Error& e) {
    throw Error(ErrorCode::kStageFailure, std::string("config: ") + e.what());
  }
  return make_pipeline_config(j, path.parent_path());
}

// artifact layout, relative to the workdir
namespace artifact {
inline constexpr const char* kPlans = "plans.jsonl";
inline constexpr const char* kRatings = "ratings.csv";
inline constexpr const char* kScores = "scores.jsonl";
inline constexpr const char* kGraphs = "graphs.jsonl";
inline constexpr const char* kPatterns = "patterns.jsonl";
inline constexpr const char* kEmerging = "emerging_vocab.json";
inline constexpr const char* kWet = "wet_vocab.json";
inline constexpr const char* kSchema = "feature_schema.json";
inline constexpr const char* kFeatures = "features.jsonl";
inline constexpr const char* kModels = "models.json";
inline constexpr const char* kTraining = "training.json";
inline constexpr const char* kPredictions = "predictions.jsonl";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kCatalog = "catalog.jsonl";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kEvaluation = "evaluation.json";
}  // namespace artifact

/// Floor area: every cell that is not wall, window or unknown.
inline double floor_area_m2(const SegmentedRaster& r) {
  std::size_t cells = 0;
  for (auto c : r.grid) {
    const auto cat = static_cast<Category>(c);
    cells += cat != Category::kWall && cat != Category::kWindow && cat != Category::kUnknown;
  }
  return static_cast<double>(cells) * r.cell_size_m2;
}

/// Artifacts written by one stage run, as workdir-relative paths.
using StageOutputs = std::vector<std::string>;

class Workspace {
 public:
  explicit Workspace(PipelineConfig config) : config_(std::move(config)) {}

  const PipelineConfig& config() const { return config_; }
  fs::path path(const std::string& rel) const { return config_.workdir / rel; }
  std::string read(const std::string& rel) const { return read_file(path(rel)); }
  void write(StageOutputs& out, const std::string& rel, std::string_view text) const {
    write_file(path(rel), text);
    out.push_back(rel);
  }

  struct PlanIndexEntry {
    std::string id;
    std::string raster;
  };

  std::vector<PlanIndexEntry> plan_index() const {
    std::vector<PlanIndexEntry> out;
    std::istringstream in(read(artifact::kPlans));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = parse_json(line, "plan index");
      out.push_back({j.at("plan_id").get<std::string>(), j.at("raster").get<std::string>()});
    }
    return out;
  }

  std::vector<SegmentedRaster> rasters() const {
    std::vector<SegmentedRaster> out;
    for (const auto& e : plan_index()) out.push_back(parse_raster(read(e.raster)));
    return out;
  }

  /// Plan records with graphs read back from the extract stage.
  std::vector<PlanRecord> plans() const {
    const auto rs = rasters();
    std::map<std::string, RoomGraph> graphs;
    std::istringstream in(read(artifact::kGraphs));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = parse_json(line, "graph row");
      graphs.emplace(j.at("plan_id").get<std::string>(), graph_from_json(j.at("graph")));
    }
    std::vector<PlanRecord> out;
    for (const auto& r : rs) {
      auto it = graphs.find(r.id);
      if (it == graphs.end()) throw Error(ErrorCode::kMalformedEntry, "no graph for plan " + r.id);
      auto g = to_labeled(it->second);
      out.push_back({r, it->second, std::move(g)});
    }
    return out;
  }

  Split split(std::size_t n) const { return split_811(n, config_.split_seed); }

 private:
  PipelineConfig config_;
};

namespace stage {

inline StageOutputs gen(const Workspace& ws) {
  const auto& c = ws.config();
  StageOutputs out;
  const auto corpus = generate_corpus(c.corpus_count, c.corpus_seed);
  auto hidden = HiddenScoreModel::make(c.score_seed, c.planted_strength, c.score_noise);
  hidden.calibrate(corpus);
  std::string index;
  std::vector<std::string> ids;
  for (const auto& r : corpus) {
    const auto rel = "rasters/" + r.id + ".json";
    ws.write(out, rel, raster_to_json(r).dump() + "\n");
    index += Json{{"plan_id", r.id}, {"raster", rel}}.dump() + "\n";
    ids.push_back(r.id);
  }
  ws.write(out, artifact::kPlans, index);
  const auto panel = make_panel(static_cast<int>(corpus.size()), c.panel, c.rating_seed);
  const auto records = simulate_ratings(corpus, hidden, panel, c.panel.block_size, c.rating_seed);
  ws.write(out, artifact::kRatings, write_ratings_csv(records));
  ws.write(out, artifact::kScores, write_scores_jsonl(aggregate_ratings(records, ids)));
  return out;
}

inline StageOutputs extract_graphs(const Workspace& ws) {
  StageOutputs out;
  std::string text;
  for (const auto& r : ws.rasters()) {
    text += Json{{"plan_id", r.id}, {"graph", graph_to_json(build_graph(r, ws.config().extract))}}.dump() + "\n";
  }
  ws.write(out, artifact::kGraphs, text);
  return out;
}

inline std::vector<CorpusGraph> training_corpus(const std::vector<PlanRecord>& plans, const Split& split) {
  std::vector<CorpusGraph> corpus;
  for (auto i : split.train) corpus.push_back({plans[i].id(), plans[i].graph});
  return corpus;
}

inline StageOutputs mine(const Workspace& ws) {
  const auto& c = ws.config();
  StageOutputs out;
  const auto plans = ws.plans();
  const auto split = ws.split(plans.size());
  const auto corpus = training_corpus(plans, split);
  MiningOptions mo;
  mo.min_support = scaled_support(c.fit.mining_support, corpus.size(), c.fit.scale_thresholds);
  mo.max_edges = c.fit.max_edges;
  const auto mined = gspan(corpus, mo);
  ws.write(out, artifact::kPatterns, write_patterns_jsonl(pattern_records(mined, corpus)));
  return out;
}

inline StageOutputs select_patterns(const Workspace& ws) {
  const auto& c = ws.config();
  StageOutputs out;
  const auto index = ws.plan_index();
  const auto split = ws.split(index.size());
  const auto all = read_scores_jsonl(ws.read(artifact::kScores));
  ScoreTable scores;
  for (auto i : split.train) scores[index[i].id] = all.at(index[i].id);
  auto eo = c.fit.emerging;
  eo.min_support = scaled_support(eo.min_support, split.train.size(), c.fit.scale_thresholds);
  const auto patterns = read_patterns_jsonl(ws.read(artifact::kPatterns));
  ws.write(out, artifact::kEmerging, write_vocab(build_emerging_vocabulary(patterns, scores, eo).vocabulary));
  return out;
}

inline StageOutputs wet_vocab(const Workspace& ws) {
  StageOutputs out;
  const auto plans = ws.plans();
  const auto split = ws.split(plans.size());
  std::vector<RoomGraph> rooms;
  for (auto i : split.train) rooms.push_back(plans[i].room);
  WetVocabulary vocab;
  try {
    vocab = build_wet_vocab(rooms);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoWetRooms) throw;
  }
  ws.write(out, artifact::kWet, write_wet_vocab(vocab));
  return out;
}

inline StageOutputs features(const Workspace& ws) {
  const auto& c = ws.config();
  StageOutputs out;
  const auto plans = ws.plans();
  const auto split = ws.split(plans.size());
  FeatureContext ctx;
  ctx.emerging = read_vocab(ws.read(artifact::kEmerging));
  ctx.wet = read_wet_vocab(ws.read(artifact::kWet));
  ctx.mcs = c.fit.mcs;
  for (auto i : split.train) {
    ctx.reference_ids.push_back(plans[i].id());
    ctx.reference_graphs.push_back(plans[i].graph);
  }
  std::vector<RawFeatures> raw;
  for (const auto& p : plans) raw.push_back(raw_features(p.id(), p.graph, p.raster, ctx));
  std::vector<RawFeatures> train_raw;
  for (auto i : split.train) train_raw.push_back(raw[i]);
  const auto schema = fit_schema(ctx, train_raw);
  std::vector<FeatureBundle> bundles;
  for (const auto& r : raw) bundles.push_back(assemble(r, schema));
  ws.write(out, artifact::kSchema, schema.to_json().dump() + "\n");
  ws.write(out, artifact::kFeatures, write_feature_store(bundles, schema));
  return out;
}

struct LoadedFeatures {
  FeatureSchema schema;
  std::vector<FeatureBundle> bundles;  // plan-index order
};

inline LoadedFeatures load_features(const Workspace& ws) {
  LoadedFeatures f;
  f.schema = FeatureSchema::from_json(parse_json(ws.read(artifact::kSchema), "feature schema"));
  f.bundles = read_feature_store(ws.read(artifact::kFeatures), f.schema);
  const auto index = ws.plan_index();
  if (f.bundles.size() != index.size()) throw Error(ErrorCode::kShapeMismatch, "feature store does not cover the corpus");
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (f.bundles[i].plan_id != index[i].id) throw Error(ErrorCode::kShapeMismatch, "feature store order differs from plan index");
  }
  return f;
}

inline std::vector<double> targets(const std::vector<FeatureBundle>& bundles, const std::vector<std::size_t>& idx,
                                   const ScoreTable& scores, int item) {
  std::vector<double> t;
  for (auto i : idx) t.push_back(scores.at(bundles[i].plan_id)[item]);
  return t;
}

inline std::vector<FeatureBundle> pick(const std::vector<FeatureBundle>& all, const std::vector<std::size_t>& idx) {
  std::vector<FeatureBundle> out;
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

inline StageOutputs train_models(const Workspace& ws) {
  const auto& c = ws.config();
  StageOutputs out;
  const auto f = load_features(ws);
  const auto scores = read_scores_jsonl(ws.read(artifact::kScores));
  const auto split = ws.split(f.bundles.size());
  const auto train_rows = pick(f.bundles, split.train);
  const auto val_rows = pick(f.bundles, split.val);
  ModelSet set;
  set.schema = f.schema.fingerprint();
  Json log = Json::object();
  for (int q = 0; q < kScoreItemCount; ++q) {
    auto tc = c.train;
    tc.seed = c.train.seed * 31 + static_cast<std::uint64_t>(q);
    auto r = train(train_rows, targets(f.bundles, split.train, scores, q), val_rows,
                   targets(f.bundles, split.val, scores, q), tc);
    Json h = Json::array();
    for (const auto& e : r.history) h.push_back({e.epoch, e.train_mse, e.val_mse});
    log[std::string(kScoreItemNames[q])] = {{"best_epoch", r.best_epoch}, {"history", h}};
    set.models.emplace_back(q, std::move(r.params));
  }
  ws.write(out, artifact::kModels, set.to_json().dump() + "\n");
  ws.write(out, artifact::kTraining, log.dump(1) + "\n");
  return out;
}

inline StageOutputs predict_scores(const Workspace& ws) {
  StageOutputs out;
  const auto f = load_features(ws);
  const auto set = ModelSet::from_json(parse_json(ws.read(artifact::kModels), "model file"));
  if (set.schema != f.schema.fingerprint()) throw Error(ErrorCode::kSchemaMismatch, "models were trained on another schema");
  if (set.models.size() != kScoreItemCount) throw Error(ErrorCode::kMalformedJson, "model file needs all 10 models");
  ScoreTable predicted;
  for (const auto& b : f.bundles) predicted[b.plan_id] = {};
  for (const auto& [item, params] : set.models) {
    const auto y = predict(params, f.bundles);
    for (std::size_t i = 0; i < y.size(); ++i) predicted[f.bundles[i].plan_id][item] = y[i];
  }
  ws.write(out, artifact::kPredictions, write_scores_jsonl(predicted));

  // held-out correlation on the production split
  const auto scores = read_scores_jsonl(ws.read(artifact::kScores));
  const auto split = ws.split(f.bundles.size());
  Json report{{"test_plans", split.test.size()}};
  double sum = 0.0;
  for (int q = 0; q < kScoreItemCount; ++q) {
    std::vector<double> y;
    for (auto i : split.test) y.push_back(predicted.at(f.bundles[i].plan_id)[q]);
    const double r = pcc_or_zero(y, targets(f.bundles, split.test, scores, q));
    report["test_pcc"][std::string(kScoreItemNames[q])] = r;
    sum += r;
  }
  report["test_pcc_mean"] = sum / kScoreItemCount;
  ws.write(out, artifact::kReport, report.dump(1) + "\n");
  return out;
}

inline StageOutputs build_catalog(const Workspace& ws) {
  StageOutputs out;
  const auto predicted = read_scores_jsonl(ws.read(artifact::kPredictions), false);
  std::vector<CatalogEntry> entries;
  for (const auto& e : ws.plan_index()) {
    const auto r = parse_raster(ws.read(e.raster));
    entries.push_back({e.id, r.bedrooms, floor_area_m2(r), predicted.at(e.id), e.raster});
  }
  make_catalog(entries);  // validates
  ws.write(out, artifact::kCatalog, write_catalog_jsonl(entries));
  return out;
}

}  // namespace stage

struct StageSpec {
  std::string name;
  std::vector<std::string> config_sections;
  std::vector<std::string> inputs;  // workdir-relative artifacts
  std::function<StageOutputs(const Workspace&)> run;
};

inline const std::vector<StageSpec>& pipeline_stages() {
  using namespace artifact;
  static const std::vector<StageSpec> stages = {
      {"gen", {"corpus", "scores", "ratings"}, {}, stage::gen},
      {"extract-graphs", {"extract"}, {kPlans}, stage::extract_graphs},
      {"mine", {"mining", "split"}, {kPlans, kGraphs}, stage::mine},
      {"select-patterns", {"emerging", "mining", "split"}, {kPlans, kPatterns, kScores}, stage::select_patterns},
      {"wet-vocab", {"split"}, {kPlans, kGraphs}, stage::wet_vocab},
      {"features", {"mcs", "split"}, {kPlans, kGraphs, kEmerging, kWet}, stage::features},
      {"train", {"train", "split"}, {kPlans, kSchema, kFeatures, kScores}, stage::train_models},
      {"predict", {"split"}, {kPlans, kSchema, kFeatures, kModels, kScores}, stage::predict_scores},
      {"catalog", {}, {kPlans, kPredictions}, stage::build_catalog},
  };
  return stages;
}

inline const StageSpec& find_stage(const std::string& name) {
  for (const auto& s : pipeline_stages()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kInvalidQuery, "unknown stage " + name);
}

enum class StageStatus { kRan, kSkipped };

struct StageRun {
  std::string stage;
  StageStatus status = StageStatus::kRan;
  double seconds = 0.0;
};

/// Content-hash cache of stage runs, kept as manifest.json in the workdir.
class Manifest {
 public:
  explicit Manifest(const Workspace& ws) : ws_(ws) {
    const auto p = ws.path(artifact::kManifest);
    if (fs::exists(p)) data_ = parse_json(read_file(p), "manifest");
    if (!data_.is_object()) data_ = Json::object();
  }

  /// sha256 over the stage name, its config sections and its inputs.
  std::string key(const StageSpec& s) const {
    std::string material = s.name + "\n";
    for (const auto& sec : s.config_sections) material += sec + "=" + ws_.config().section(sec).dump() + "\n";
    for (const auto& in : s.inputs) {
      const auto p = ws_.path(in);
      if (!fs::exists(p)) throw Error(ErrorCode::kIo, "missing input " + in + "; run the producing stage first");
      material += in + "=" + sha256_hex(read_file(p)) + "\n";
    }
    return sha256_hex(material);
  }

  /// True when the recorded run matches `key` and its outputs are intact;
  /// HashMismatch when an output changed on disk since it was recorded.
  bool fresh(const StageSpec& s, const std::string& key) const {
    if (!data_.contains(s.name)) return false;
    const auto& rec = data_[s.name];
    if (rec.value("key", "") != key) return false;
    for (const auto& [rel, hash] : rec.at("outputs").items()) {
      const auto p = ws_.path(rel);
      if (!fs::exists(p)) return false;
      if (sha256_hex(read_file(p)) != hash.get<std::string>()) {
        throw Error(ErrorCode::kHashMismatch, "stage " + s.name + ": " + rel + " differs from its recorded hash");
      }
    }
    return true;
  }

  void record(const StageSpec& s, const std::string& key, const StageOutputs& outputs) {
    Json hashes = Json::object();
    for (const auto& rel : outputs) hashes[rel] = sha256_hex(read_file(ws_.path(rel)));
    data_[s.name] = {{"key", key}, {"outputs", hashes}};
    write_file(ws_.path(artifact::kManifest), data_.dump(1) + "\n");
  }

 private:
  const Workspace& ws_;
  Json data_;
};

/// Runs one stage unless its cached outputs are current. Any error is
/// rethrown as StageFailure naming the stage; HashMismatch passes through.
inline StageRun run_stage(const Workspace& ws, Manifest& manifest, const StageSpec& s, bool force = false) {
  StageRun run{s.name};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto key = manifest.key(s);
    if (!force && manifest.fresh(s, key)) {
      run.status = StageStatus::kSkipped;
    } else {
      manifest.record(s, key, s.run(ws));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kHashMismatch || e.code() == ErrorCode::kStageFailure) throw;
    throw Error(ErrorCode::kStageFailure, s.name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kStageFailure, s.name + ": " + e.what());
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

/// Runs stages up to and including `last` in dependency order.
inline std::vector<StageRun> run_pipeline(const PipelineConfig& config, const std::string& last = "catalog",
                                          const std::function<void(const StageRun&)>& on_stage = {}) {
  Workspace ws(config);
  Manifest manifest(ws);
  find_stage(last);
  std::vector<StageRun> runs;
  for (const auto& s : pipeline_stages()) {
    runs.push_back(run_stage(ws, manifest, s));
    if (on_stage) on_stage(runs.back());
    if (s.name == last) break;
  }
  return runs;
}

/// Resampled 8:1:1 evaluation on the generated corpus; needs gen and
/// extract-graphs outputs.
inline ProtocolResult evaluate_workspace(const PipelineConfig& config, bool shuffle_labels = false) {
  Workspace ws(config);
  ProtocolConfig pc;
  pc.repeats = config.eval_repeats;
  pc.seed = config.eval_seed;
  pc.fit = config.fit;
  pc.train = config.train;
  pc.shuffle_labels = shuffle_labels;
  const auto result = evaluate_protocol(ws.plans(), read_scores_jsonl(ws.read(artifact::kScores)), pc);
  write_file(ws.path(shuffle_labels ? "evaluation_shuffled.json" : artifact::kEvaluation), result.to_json().dump(1) + "\n");
  return result;
}

}  // namespace planscore
