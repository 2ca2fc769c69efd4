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
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "planscore/dfs_code.hpp"
#include "planscore/error.hpp"
#include "planscore/gspan.hpp"
#include "planscore/isomorphism.hpp"
#include "planscore/raster.hpp"
#include "planscore/scores.hpp"

namespace planscore {

/// A mined pattern keyed by plan ids rather than corpus positions.
struct PatternRecord {
  std::string code;
  std::vector<std::string> plans;  // ascending
  LabeledGraph graph;

  int support() const { return static_cast<int>(plans.size()); }
};

inline PatternRecord make_pattern_record(std::string code, std::vector<std::string> plans) {
  PatternRecord p;
  p.graph = code_to_graph(parse_dfs_code(code));
  p.code = std::move(code);
  std::sort(plans.begin(), plans.end());
  plans.erase(std::unique(plans.begin(), plans.end()), plans.end());
  p.plans = std::move(plans);
  return p;
}

inline std::vector<PatternRecord> pattern_records(const MiningResult& mined, const std::vector<CorpusGraph>& corpus) {
  std::vector<PatternRecord> out;
  out.reserve(mined.patterns.size());
  for (const auto& p : mined.patterns) {
    PatternRecord r;
    r.code = p.code_string;
    r.graph = code_to_graph(p.code);
    for (int i : p.support_set) r.plans.push_back(corpus[static_cast<std::size_t>(i)].plan_id);
    std::sort(r.plans.begin(), r.plans.end());
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string write_patterns_jsonl(const std::vector<PatternRecord>& patterns) {
  std::string out;
  for (const auto& p : patterns) {
    Json j;
    j["code"] = p.code;
    j["support"] = p.support();
    j["plans"] = p.plans;
    out += j.dump() + "\n";
  }
  return out;
}

inline std::vector<PatternRecord> read_patterns_jsonl(std::string_view text) {
  std::vector<PatternRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = parse_json(line, "pattern");
    if (!j.is_object() || !j.contains("code") || !j["code"].is_string() || !j.contains("plans") ||
        !j["plans"].is_array()) {
      throw Error(ErrorCode::kMalformedJson, "pattern entry needs code and plans");
    }
    out.push_back(make_pattern_record(j["code"].get<std::string>(), j["plans"].get<std::vector<std::string>>()));
  }
  return out;
}

enum class Polarity { kTop, kBottom };

struct ScoreBand {
  int question = 0;  // score item index, Total = 9
  Polarity polarity = Polarity::kTop;
  std::vector<std::string> plan_ids;  // most extreme first

  std::string name() const {
    return std::string(kScoreItemNames[static_cast<std::size_t>(question)]) +
           (polarity == Polarity::kTop ? "/top" : "/bottom");
  }
};

inline int band_size(std::size_t n, double fraction = 0.1) {
  return static_cast<int>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

/// Top and bottom bands of one score item. Both come from a single order
/// (score descending, id ascending) so equal scores still give disjoint bands.
inline std::pair<ScoreBand, ScoreBand> band_split(const ScoreTable& scores, int question, double fraction = 0.1) {
  if (question < 0 || question >= kScoreItemCount) throw Error(ErrorCode::kInvalidQuery, "score item out of range");
  if (scores.size() < 10) {
    throw Error(ErrorCode::kTooFewPlans, "band split needs >= 10 plans, got " + std::to_string(scores.size()));
  }
  std::vector<std::pair<double, std::string>> order;
  order.reserve(scores.size());
  for (const auto& [id, s] : scores) order.emplace_back(s[question], id);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const int k = band_size(order.size(), fraction);
  ScoreBand top{question, Polarity::kTop, {}};
  ScoreBand bottom{question, Polarity::kBottom, {}};
  for (int i = 0; i < k; ++i) top.plan_ids.push_back(order[static_cast<std::size_t>(i)].second);
  for (int i = 0; i < k; ++i) bottom.plan_ids.push_back(order[order.size() - 1 - static_cast<std::size_t>(i)].second);
  return {top, bottom};
}

/// All 20 bands in the order Q1 top, Q1 bottom, ..., Total bottom.
inline std::vector<ScoreBand> all_bands(const ScoreTable& scores, double fraction = 0.1) {
  std::vector<ScoreBand> out;
  for (int q = 0; q < kScoreItemCount; ++q) {
    auto [top, bottom] = band_split(scores, q, fraction);
    out.push_back(std::move(top));
    out.push_back(std::move(bottom));
  }
  return out;
}

/// Growth-rate ratio GR_top / GR_bottom from raw counts. Each relative
/// support that is zero is replaced by 1 / (2 * band size), so the result
/// is always finite and positive.
inline double growth_rate_ratio(int in_top, int in_bottom, int support, int band, int corpus) {
  const double eps = 1.0 / (2.0 * band);
  const double rest = static_cast<double>(corpus - band);
  auto rel = [&](int count, double size) { return count > 0 ? count / size : eps; };
  const double gr_top = rel(in_top, band) / rel(support - in_top, rest);
  const double gr_bottom = rel(in_bottom, band) / rel(support - in_bottom, rest);
  return gr_top / gr_bottom;
}

inline double growth_rate_ratio(const PatternRecord& pattern, const ScoreBand& top, const ScoreBand& bottom,
                                int corpus) {
  auto count = [&](const ScoreBand& b) {
    int c = 0;
    for (const auto& id : b.plan_ids) c += std::binary_search(pattern.plans.begin(), pattern.plans.end(), id);
    return c;
  };
  return growth_rate_ratio(count(top), count(bottom), pattern.support(), static_cast<int>(top.plan_ids.size()),
                           corpus);
}

struct EmergingOptions {
  /// Whole-corpus support gate; <= 0 means max(2, round(10 * n / 1000)).
  int min_support = 0;
  double mean_gate = 0.25;
  double ratio_gate = 4.0;
  int top_k = 20;
  double band_fraction = 0.1;

  int support_gate(std::size_t corpus) const {
    if (min_support > 0) return min_support;
    return std::max(2, static_cast<int>(std::lround(10.0 * static_cast<double>(corpus) / 1000.0)));
  }
};

/// A pattern admitted to one band.
struct BandCandidate {
  int pattern = 0;      // index into the pattern list
  double mean = 0.0;    // mean band-item score of plans containing the pattern
  double ratio = 1.0;   // growth-rate ratio
  double tf = 0.0;      // fraction of band plans containing the pattern
  double weight = 0.0;  // tf * idf
};

using BandCandidates = std::vector<std::vector<BandCandidate>>;

/// Threshold filter. A pattern enters a top band when its corpus support,
/// its mean containing-plan score and its growth-rate ratio all pass and at
/// least one band plan contains it; bottom bands mirror the gates.
inline BandCandidates step1_filter(const std::vector<PatternRecord>& patterns, const std::vector<ScoreBand>& bands,
                                   const ScoreTable& scores, const EmergingOptions& options = {}) {
  const int n = static_cast<int>(scores.size());
  const int gate = options.support_gate(scores.size());
  std::unordered_map<std::string, int> index;
  std::vector<const ScoreVector*> by_index;
  for (const auto& [id, s] : scores) {
    index.emplace(id, static_cast<int>(by_index.size()));
    by_index.push_back(&s);
  }
  std::vector<std::vector<char>> member(bands.size(), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (const auto& id : bands[b].plan_ids) member[b][static_cast<std::size_t>(index.at(id))] = 1;
  }
  // bands come in (top, bottom) pairs per score item
  std::map<int, std::pair<int, int>> pair_of;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    auto& slot = pair_of.try_emplace(bands[b].question, std::pair<int, int>{-1, -1}).first->second;
    (bands[b].polarity == Polarity::kTop ? slot.first : slot.second) = static_cast<int>(b);
  }
  BandCandidates out(bands.size());
  std::vector<int> hits(bands.size());
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto& pat = patterns[p];
    if (pat.support() < gate) continue;
    std::array<double, kScoreItemCount> sum{};
    int scored = 0;
    std::fill(hits.begin(), hits.end(), 0);
    for (const auto& id : pat.plans) {
      auto it = index.find(id);
      if (it == index.end()) continue;
      ++scored;
      const auto& s = *by_index[static_cast<std::size_t>(it->second)];
      for (int q = 0; q < kScoreItemCount; ++q) sum[q] += s[q];
      for (std::size_t b = 0; b < bands.size(); ++b) hits[b] += member[b][static_cast<std::size_t>(it->second)];
    }
    if (scored < gate) continue;
    for (const auto& [q, tb] : pair_of) {
      if (tb.first < 0 || tb.second < 0) continue;
      const double mean = sum[q] / scored;
      const int k = static_cast<int>(bands[static_cast<std::size_t>(tb.first)].plan_ids.size());
      const double ratio = growth_rate_ratio(hits[tb.first], hits[tb.second], scored, k, n);
      if (hits[tb.first] > 0 && mean >= options.mean_gate && ratio > options.ratio_gate) {
        out[tb.first].push_back({static_cast<int>(p), mean, ratio, static_cast<double>(hits[tb.first]) / k, 0.0});
      }
      if (hits[tb.second] > 0 && mean <= -options.mean_gate && ratio < 1.0 / options.ratio_gate) {
        out[tb.second].push_back({static_cast<int>(p), mean, ratio, static_cast<double>(hits[tb.second]) / k, 0.0});
      }
    }
  }
  return out;
}

/// Each band's candidate set is a document; idf = ln(#bands / #bands whose
/// set contains the pattern). Sorts each band by weight, then code.
inline void tfidf_rank(BandCandidates& bands, const std::vector<PatternRecord>& patterns) {
  std::unordered_map<int, int> df;
  for (const auto& band : bands) {
    std::set<int> seen;
    for (const auto& c : band) {
      if (seen.insert(c.pattern).second) ++df[c.pattern];
    }
  }
  const double docs = static_cast<double>(bands.size());
  for (auto& band : bands) {
    for (auto& c : band) c.weight = c.tf * std::log(docs / df.at(c.pattern));
    std::sort(band.begin(), band.end(), [&](const BandCandidate& a, const BandCandidate& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return patterns[a.pattern].code < patterns[b.pattern].code;
    });
  }
}

/// Removes larger members of inclusion chains unless they are more extreme
/// than every smallest member. For each candidate q, D(q) is the set of band
/// candidates that are proper subgraphs of q; q is kept when it has the
/// fewest nodes among D(q) and q, or when its mean beats the mean of every
/// member of D(q) with that fewest node count.
template <class SubgraphOf>
std::vector<BandCandidate> inclusion_prune_band(const std::vector<BandCandidate>& band, Polarity polarity,
                                                const std::vector<PatternRecord>& patterns, SubgraphOf subgraph_of) {
  std::vector<BandCandidate> kept;
  for (const auto& q : band) {
    const auto& gq = patterns[q.pattern].graph;
    const int nq = static_cast<int>(gq.labels.size());
    std::vector<const BandCandidate*> below;
    int min_nodes = nq;
    for (const auto& p : band) {
      if (p.pattern == q.pattern) continue;
      const auto& gp = patterns[p.pattern].graph;
      if (gp.labels.size() > gq.labels.size() || gp.edges.size() > gq.edges.size()) continue;
      if (gp.labels.size() == gq.labels.size() && gp.edges.size() == gq.edges.size()) continue;
      if (!subgraph_of(gp, gq)) continue;
      below.push_back(&p);
      min_nodes = std::min(min_nodes, static_cast<int>(gp.labels.size()));
    }
    bool keep = nq == min_nodes;
    if (!keep) {
      keep = true;
      for (const auto* p : below) {
        if (static_cast<int>(patterns[p->pattern].graph.labels.size()) != min_nodes) continue;
        const bool beats = polarity == Polarity::kTop ? q.mean > p->mean : q.mean < p->mean;
        if (!beats) {
          keep = false;
          break;
        }
      }
    }
    if (keep) kept.push_back(q);
  }
  return kept;
}

inline BandCandidates inclusion_prune(const BandCandidates& candidates, const std::vector<ScoreBand>& bands,
                                      const std::vector<PatternRecord>& patterns) {
  BandCandidates out(candidates.size());
  auto iso = [](const LabeledGraph& p, const LabeledGraph& q) { return subgraph_isomorphic(p, q); };
  for (std::size_t b = 0; b < candidates.size(); ++b) {
    out[b] = inclusion_prune_band(candidates[b], bands[b].polarity, patterns, iso);
  }
  return out;
}

struct VocabSource {
  std::string band;
  int rank = 0;
  double mean = 0.0;
  double ratio = 1.0;
  double weight = 0.0;
};

struct VocabEntry {
  std::string code;
  LabeledGraph graph;
  int support = 0;
  std::vector<VocabSource> sources;
};

struct EmergingVocabulary {
  std::vector<VocabEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<std::string> codes() const {
    std::vector<std::string> out;
    for (const auto& e : entries) out.push_back(e.code);
    return out;
  }
};

/// Top `k` per band by mean-score magnitude (then weight, then code),
/// merged in band order with duplicates folded into their first entry.
inline EmergingVocabulary select_vocabulary(const BandCandidates& candidates, const std::vector<ScoreBand>& bands,
                                            const std::vector<PatternRecord>& patterns, int k = 20) {
  EmergingVocabulary vocab;
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t b = 0; b < candidates.size(); ++b) {
    auto ranked = candidates[b];
    std::sort(ranked.begin(), ranked.end(), [&](const BandCandidate& x, const BandCandidate& y) {
      if (std::abs(x.mean) != std::abs(y.mean)) return std::abs(x.mean) > std::abs(y.mean);
      if (x.weight != y.weight) return x.weight > y.weight;
      return patterns[x.pattern].code < patterns[y.pattern].code;
    });
    if (static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      const auto& c = ranked[r];
      const auto& pat = patterns[c.pattern];
      VocabSource src{bands[b].name(), static_cast<int>(r) + 1, c.mean, c.ratio, c.weight};
      auto [it, fresh] = position.try_emplace(pat.code, vocab.entries.size());
      if (fresh) vocab.entries.push_back({pat.code, pat.graph, pat.support(), {}});
      vocab.entries[it->second].sources.push_back(std::move(src));
    }
  }
  return vocab;
}

struct EmergingResult {
  std::vector<ScoreBand> bands;
  BandCandidates step1;
  BandCandidates pruned;
  EmergingVocabulary vocabulary;
};

/// Band split, threshold filter, TF-IDF, inclusion pruning and top-k.
inline EmergingResult build_emerging_vocabulary(const std::vector<PatternRecord>& patterns, const ScoreTable& scores,
                                                const EmergingOptions& options = {}) {
  EmergingResult r;
  r.bands = all_bands(scores, options.band_fraction);
  r.step1 = step1_filter(patterns, r.bands, scores, options);
  tfidf_rank(r.step1, patterns);
  r.pruned = inclusion_prune(r.step1, r.bands, patterns);
  r.vocabulary = select_vocabulary(r.pruned, r.bands, patterns, options.top_k);
  return r;
}

inline std::vector<std::uint8_t> encode_presence(const LabeledGraph& graph, const EmergingVocabulary& vocab) {
  if (vocab.entries.empty()) throw Error(ErrorCode::kInvalidQuery, "empty vocabulary");
  std::vector<std::uint8_t> bits;
  bits.reserve(vocab.size());
  for (const auto& e : vocab.entries) bits.push_back(subgraph_isomorphic(e.graph, graph) ? 1 : 0);
  return bits;
}

inline std::vector<std::uint8_t> encode_presence(const RoomGraph& graph, const EmergingVocabulary& vocab) {
  return encode_presence(to_labeled(graph), vocab);
}

/// One code per line, in feature order.
inline std::string write_vocab(const EmergingVocabulary& vocab) {
  std::string out;
  for (const auto& e : vocab.entries) out += e.code + "\n";
  return out;
}

inline EmergingVocabulary read_vocab(std::string_view text) {
  EmergingVocabulary vocab;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    VocabEntry e;
    e.graph = code_to_graph(parse_dfs_code(line));
    e.code = line;
    if (!seen.insert(line).second) throw Error(ErrorCode::kInvalidCode, "duplicate vocabulary code " + line);
    vocab.entries.push_back(std::move(e));
  }
  return vocab;
}

inline Json emerging_report(const EmergingResult& r, const std::vector<PatternRecord>& patterns,
                            const EmergingOptions& options, std::size_t corpus) {
  Json j;
  j["corpus_size"] = corpus;
  j["pattern_count"] = patterns.size();
  j["thresholds"] = {{"min_support", options.support_gate(corpus)},
                     {"mean_gate", options.mean_gate},
                     {"ratio_gate", options.ratio_gate},
                     {"top_k", options.top_k},
                     {"band_fraction", options.band_fraction}};
  Json bands = Json::array();
  for (std::size_t b = 0; b < r.bands.size(); ++b) {
    bands.push_back({{"band", r.bands[b].name()},
                     {"plans", r.bands[b].plan_ids.size()},
                     {"step1", r.step1[b].size()},
                     {"pruned", r.pruned[b].size()}});
  }
  j["bands"] = bands;
  Json entries = Json::array();
  for (const auto& e : r.vocabulary.entries) {
    Json sources = Json::array();
    for (const auto& s : e.sources) {
      // ratios are finite by construction
      sources.push_back({{"band", s.band}, {"rank", s.rank}, {"mean", s.mean}, {"ratio", s.ratio}, {"weight", s.weight}});
    }
    entries.push_back({{"code", e.code}, {"support", e.support}, {"sources", sources}});
  }
  j["vocabulary"] = entries;
  return j;
}

}  // namespace planscore
