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
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "planscore/dfs_code.hpp"
#include "planscore/gspan.hpp"
#include "planscore/mcs.hpp"
#include "planscore/oracles.hpp"
#include "planscore/ratings.hpp"
#include "planscore/regressor.hpp"
#include "planscore/search.hpp"
#include "planscore/synth.hpp"

namespace planscore {

struct SuiteReport {
  std::string suite;
  bool passed = true;
  std::string summary;
  std::string counterexample;  // first failure, empty when passed
  double seconds = 0.0;
  Json metrics = Json::object();

  void fail(const std::string& what) {
    if (passed) counterexample = what;
    passed = false;
  }

  Json to_json() const {
    return {{"suite", suite}, {"passed", passed}, {"summary", summary}, {"counterexample", counterexample},
            {"seconds", seconds}, {"metrics", metrics}};
  }
};

namespace detail {

inline SuiteReport timed(const std::string& name, const std::function<void(SuiteReport&)>& body) {
  SuiteReport r;
  r.suite = name;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

/// gSpan (class, support set) output against brute-force enumeration on
/// small seeded corpora (<= 20 graphs of <= 6 nodes).
inline SuiteReport verify_mining_oracle(int corpora = 20, std::uint64_t seed = 1) {
  return detail::timed("mining-oracle", [&](SuiteReport& r) {
    std::mt19937_64 rng(seed);
    const std::vector<int> labels = {category_code(Category::kWbed), category_code(Category::kDk),
                                     category_code(Category::kBath), category_code(Category::kCorri)};
    int checked = 0;
    std::size_t patterns = 0;
    for (int c = 0; c < corpora; ++c) {
      const int size = 8 + static_cast<int>(rng() % 13);
      std::vector<LabeledGraph> graphs;
      std::vector<CorpusGraph> corpus;
      for (int i = 0; i < size; ++i) {
        graphs.push_back(oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), labels, 0.35, rng() % 4 != 0));
        corpus.push_back({"g" + std::to_string(i), graphs.back()});
      }
      for (int support : {2, 3, 4, 5}) {
        MiningOptions options;
        options.min_support = support;
        options.max_edges = 64;
        const auto mined = gspan(corpus, options);
        std::map<std::string, std::vector<int>> got;
        for (const auto& p : mined.patterns) got.emplace(oracle::permutation_canonical(code_to_graph(p.code)), p.support_set);
        const auto want = oracle::enumerate_frequent(graphs, support);
        ++checked;
        patterns += want.size();
        if (got != want || got.size() != mined.patterns.size()) {
          r.fail("corpus " + std::to_string(c) + " min_support " + std::to_string(support) + ": mined " +
                 std::to_string(mined.patterns.size()) + " classes, oracle " + std::to_string(want.size()));
        }
      }
    }
    r.metrics = {{"corpora", corpora}, {"runs", checked}, {"oracle_patterns", patterns}};
    r.summary = std::to_string(checked) + " (corpus, support) runs, " + std::to_string(patterns) + " frequent classes";
  });
}

/// min DFS code is invariant under relabeling and separates isomorphism
/// classes (exhaustive permutation canonical form as the oracle).
inline SuiteReport verify_canonical_codes(int graphs = 1000, std::uint64_t seed = 2) {
  return detail::timed("canonical-code", [&](SuiteReport& r) {
    std::mt19937_64 rng(seed);
    const std::vector<int> labels = {category_code(Category::kWbed), category_code(Category::kDk),
                                     category_code(Category::kBath), category_code(Category::kBalc)};
    std::map<std::string, std::string> code_to_class, class_to_code;
    for (int i = 0; i < graphs; ++i) {
      const int n = 2 + static_cast<int>(rng() % 6);
      const auto g = oracle::random_graph(rng, n, labels, 0.2 + 0.4 * static_cast<double>(rng() % 2), true);
      const auto code = canonical_string(g);
      for (int k = 0; k < 3; ++k) {
        const auto relabeled = canonical_string(oracle::permute(g, oracle::random_permutation(rng, n)));
        if (relabeled != code) r.fail("graph " + std::to_string(i) + ": " + code + " vs " + relabeled);
      }
      const auto cls = oracle::permutation_canonical(g);
      if (code_to_class.emplace(code, cls).first->second != cls) r.fail("code " + code + " shared by two classes");
      if (class_to_code.emplace(cls, code).first->second != code) r.fail("class " + cls + " has two codes");
    }
    r.metrics = {{"graphs", graphs}, {"classes", class_to_code.size()}};
    r.summary = std::to_string(graphs) + " graphs, " + std::to_string(class_to_code.size()) + " classes";
  });
}

/// Exact MCS on all pairs of small graphs against brute force, plus the
/// similarity identities.
inline SuiteReport verify_mcs_oracle(int graphs = 50, std::uint64_t seed = 3) {
  return detail::timed("mcs-oracle", [&](SuiteReport& r) {
    std::mt19937_64 rng(seed);
    const std::vector<int> labels{1, 3, 5, 9};
    std::vector<LabeledGraph> gs;
    for (int i = 0; i < graphs; ++i) {
      gs.push_back(oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), labels, 0.4, rng() % 2 == 0));
    }
    double worst_asym = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      for (std::size_t j = 0; j < gs.size(); ++j) {
        const auto got = mcs_size(gs[i], gs[j]);
        const auto want = oracle::mcs_size(gs[i], gs[j]);
        ++pairs;
        if (std::pair(got.nodes, got.edges) != want || got.approximate) {
          r.fail("pair " + std::to_string(i) + "," + std::to_string(j) + ": got (" + std::to_string(got.nodes) + "," +
                 std::to_string(got.edges) + ") want (" + std::to_string(want.first) + "," +
                 std::to_string(want.second) + ")");
        }
        worst_asym = std::max(worst_asym, std::abs(similarity(gs[i], gs[j]) - similarity(gs[j], gs[i])));
      }
      if (similarity(gs[i], gs[i]) != 1.0) r.fail("sim(G,G) != 1 for graph " + std::to_string(i));
    }
    if (worst_asym > 1e-12) r.fail("asymmetry " + std::to_string(worst_asym));
    // label-disjoint pairs
    for (int t = 0; t < 50; ++t) {
      const auto a = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), {1, 3}, 0.4, true);
      const auto b = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), {5, 9}, 0.4, true);
      if (similarity(a, b) != 0.0) r.fail("label-disjoint pair with nonzero similarity");
    }
    r.metrics = {{"graphs", graphs}, {"pairs", pairs}, {"max_asymmetry", worst_asym}};
    r.summary = std::to_string(pairs) + " ordered pairs";
  });
}

/// Analytic gradients against central differences on random small configs.
inline SuiteReport verify_grad_check(int configs = 20, std::uint64_t seed = 0) {
  return detail::timed("grad-check", [&](SuiteReport& r) {
    double worst = 0.0;
    for (int i = 0; i < configs; ++i) {
      const auto g = gradient_check(seed + static_cast<std::uint64_t>(i));
      worst = std::max(worst, g.max_rel_error);
      if (!(g.max_rel_error < 1e-4)) {
        r.fail("config " + std::to_string(i) + " (seed " + std::to_string(g.seed) + ") tensor " + g.worst_tensor +
               " rel err " + std::to_string(g.max_rel_error));
      }
    }
    r.metrics = {{"configs", configs}, {"max_rel_error", worst}};
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d configs, max rel err %.3g", configs, worst);
    r.summary = buf;
  });
}

namespace detail {

inline std::vector<CatalogEntry> seeded_catalog(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<CatalogEntry> out;
  for (int i = 0; i < n; ++i) {
    CatalogEntry e;
    e.plan_id = "c" + std::to_string(rng() % 1000000);
    e.plan_id += "_" + std::to_string(i);
    e.bedrooms = 1 + static_cast<int>(rng() % 6);
    e.total_area_m2 = 25.0 + static_cast<double>(rng() % 120);
    for (int q = 0; q < kScoreItemCount; ++q) e.scores[q] = std::round(u(rng) * 8) / 8;  // ties on purpose
    out.push_back(e);
  }
  return out;
}

inline std::vector<std::string> brute_rank(const SearchQuery& q, const std::vector<CatalogEntry>& entries) {
  std::vector<std::tuple<double, double, std::string>> keys;
  for (const auto& e : entries) {
    if (q.bedrooms && (*q.bedrooms >= 4 ? e.bedrooms < 4 : e.bedrooms != *q.bedrooms)) continue;
    if (q.min_area && e.total_area_m2 < *q.min_area) continue;
    if (q.max_area && e.total_area_m2 > *q.max_area) continue;
    double c = 0.0;
    for (int k = 0; k < kQuestionCount; ++k) c += q.weights[static_cast<std::size_t>(k)] * e.scores[k];
    keys.emplace_back(-c, -e.scores[kTotalIndex], e.plan_id);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> ids;
  for (const auto& k : keys) {
    if (static_cast<int>(ids.size()) == q.limit) break;
    ids.push_back(std::get<2>(k));
  }
  return ids;
}

}  // namespace detail

/// rank() against an independent filter + full sort, single-criterion
/// queries, and catalog-permutation invariance.
inline SuiteReport verify_ranking_oracle(int catalogs = 5, int entries = 200, int queries = 100, std::uint64_t seed = 4) {
  return detail::timed("ranking-oracle", [&](SuiteReport& r) {
    std::mt19937_64 rng(seed);
    int checked = 0;
    auto ids = [](const std::vector<RankedEntry>& v) {
      std::vector<std::string> out;
      for (const auto& x : v) out.push_back(x.entry.plan_id);
      return out;
    };
    for (int c = 0; c < catalogs; ++c) {
      const auto list = detail::seeded_catalog(entries, rng);
      auto shuffled = list;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const auto catalog = make_catalog(list);
      const auto permuted = make_catalog(shuffled);
      for (int i = 0; i < queries; ++i) {
        SearchQuery q;
        const int mode = static_cast<int>(rng() % 4);
        if (mode == 0) {
          q.weights[rng() % kQuestionCount] = 1 + static_cast<int>(rng() % 2);
        } else {
          for (auto& w : q.weights) w = static_cast<int>(rng() % 3);
        }
        if (rng() % 2) q.bedrooms = 1 + static_cast<int>(rng() % 4);
        if (rng() % 3 == 0) q.min_area = 25.0 + static_cast<double>(rng() % 60);
        if (rng() % 3 == 0) q.max_area = q.min_area.value_or(25.0) + static_cast<double>(rng() % 80);
        q.limit = 1 + static_cast<int>(rng() % (entries + 20));
        const auto got = ids(rank(q, catalog));
        ++checked;
        if (got != detail::brute_rank(q, list)) {
          r.fail("catalog " + std::to_string(c) + " query " + std::to_string(i) + ": order differs from oracle");
        }
        if (ids(rank(q, permuted)) != got) r.fail("catalog " + std::to_string(c) + " query " + std::to_string(i) + ": permutation changed order");
        if (mode == 0) {
          int k = 0;
          while (q.weights[static_cast<std::size_t>(k)] == 0) ++k;
          const auto res = rank(q, catalog);
          for (std::size_t j = 1; j < res.size(); ++j) {
            if (res[j - 1].entry.scores[k] < res[j].entry.scores[k]) r.fail("single-weight query not ordered by Q" + std::to_string(k + 1));
          }
        }
      }
    }
    r.metrics = {{"catalogs", catalogs}, {"entries", entries}, {"queries", checked}};
    r.summary = std::to_string(checked) + " queries over " + std::to_string(catalogs) + " catalogs of " + std::to_string(entries);
  });
}

/// Rating aggregation invariants on a simulated panel with straight-liners.
inline SuiteReport verify_aggregation(std::uint64_t seed = 5) {
  return detail::timed("aggregation", [&](SuiteReport& r) {
    const auto plans = generate_corpus(60, seed);
    auto hidden = HiddenScoreModel::make(seed);
    hidden.calibrate(plans);
    PanelSpec spec;
    spec.noise_sd = 0.4;
    spec.straightliner_fraction = 0.15;
    const auto panel = make_panel(static_cast<int>(plans.size()), spec, seed);
    const auto records = simulate_ratings(plans, hidden, panel, spec.block_size, seed);
    std::set<std::string> constant;
    {
      std::map<std::string, std::set<int>> distinct;
      for (const auto& rec : records) distinct[rec.participant_id].insert(rec.raw);
      for (const auto& [id, s] : distinct) {
        if (s.size() == 1) constant.insert(id);
      }
    }
    const auto kept = remove_straightliners(records);
    std::set<std::string> kept_ids;
    for (const auto& rec : kept) kept_ids.insert(rec.participant_id);
    for (const auto& id : constant) {
      if (kept_ids.count(id)) r.fail("straight-liner " + id + " survived");
    }
    std::size_t expected_kept = 0;
    for (const auto& rec : records) expected_kept += constant.count(rec.participant_id) == 0;
    if (kept.size() != expected_kept) r.fail("non-constant participant dropped");

    const auto z = standardize_all(kept);
    std::map<std::string, std::vector<double>> per;
    for (const auto& s : z) per[s.record.participant_id].push_back(s.z);
    double worst_mean = 0.0, worst_sd = 0.0;
    for (const auto& [id, v] : per) {
      double m = 0.0, var = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      for (double x : v) var += (x - m) * (x - m);
      var /= static_cast<double>(v.size());
      worst_mean = std::max(worst_mean, std::abs(m));
      worst_sd = std::max(worst_sd, std::abs(std::sqrt(var) - 1.0));
    }
    if (worst_mean > 1e-9 || worst_sd > 1e-9) r.fail("standardized moments off: mean " + std::to_string(worst_mean) + " sd " + std::to_string(worst_sd));

    // affine maps of one participant's raws leave its z-scores unchanged
    double worst_affine = 0.0;
    std::map<std::string, std::vector<RatingRecord>> groups;
    for (const auto& rec : kept) groups[rec.participant_id].push_back(rec);
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, -3}, {2, -1}, {3, 7}}) {
      for (const auto& [id, g] : groups) {
        auto mapped = g;
        for (auto& rec : mapped) rec.raw = a * rec.raw + b;
        const auto z0 = standardize_participant(g);
        const auto z1 = standardize_participant(mapped);
        for (std::size_t i = 0; i < z0.size(); ++i) worst_affine = std::max(worst_affine, std::abs(z0[i].z - z1[i].z));
      }
    }
    if (worst_affine > 1e-12) r.fail("affine invariance off by " + std::to_string(worst_affine));

    std::vector<std::string> ids;
    for (const auto& p : plans) ids.push_back(p.id);
    const auto table = aggregate_ratings(records, ids);
    for (int q = 0; q < kScoreItemCount; ++q) {
      double lo = 2.0, hi = -2.0;
      std::set<double> distinct;
      for (const auto& [id, s] : table) {
        lo = std::min(lo, s[q]);
        hi = std::max(hi, s[q]);
        distinct.insert(s[q]);
      }
      if (lo < -1.0 || hi > 1.0) r.fail(std::string(kScoreItemNames[q]) + " outside [-1, 1]");
      if (distinct.size() >= 2 && (lo != -1.0 || hi != 1.0)) r.fail(std::string(kScoreItemNames[q]) + " does not reach +-1");
    }
    r.metrics = {{"participants", per.size()}, {"straightliners", constant.size()}, {"max_mean_dev", worst_mean},
                 {"max_sd_dev", worst_sd}, {"max_affine_dev", worst_affine}};
    r.summary = std::to_string(per.size()) + " participants kept, " + std::to_string(constant.size()) + " straight-liners removed";
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"mining-oracle", "mcs-oracle", "grad-check", "ranking-oracle",
                                                 "aggregation", "canonical-code"};
  return names;
}

/// Runs a named suite; unknown names throw InvalidQuery.
inline SuiteReport run_suite(const std::string& name) {
  if (name == "mining-oracle") return verify_mining_oracle();
  if (name == "mcs-oracle") return verify_mcs_oracle();
  if (name == "grad-check") return verify_grad_check();
  if (name == "ranking-oracle") return verify_ranking_oracle();
  if (name == "aggregation") return verify_aggregation();
  if (name == "canonical-code") return verify_canonical_codes();
  throw Error(ErrorCode::kInvalidQuery, "unknown suite " + name);
}

}  // namespace planscore
