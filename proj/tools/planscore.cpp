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

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "planscore/pipeline.hpp"
#include "planscore/server.hpp"
#include "planscore/verify.hpp"

namespace {

using namespace planscore;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct Common {
  std::string config;
  std::string workdir;

  PipelineConfig load() const {
    auto c = config.empty() ? make_pipeline_config(Json::object()) : load_pipeline_config(config);
    if (!workdir.empty()) c.workdir = workdir;
    return c;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config, "JSON config file (defaults apply to missing keys)");
  cmd->add_option("--workdir", common.workdir, "artifact directory, overrides the config");
}

void print_run(const StageRun& r) {
  std::printf("%-16s %s %.2fs\n", r.stage.c_str(), r.status == StageStatus::kSkipped ? "skipped" : "ran    ", r.seconds);
  std::fflush(stdout);
}

void print_pcc(const ProtocolResult& r) {
  for (int q = 0; q < kScoreItemCount; ++q) {
    std::printf("%-6s %.4f\n", std::string(kScoreItemNames[q]).c_str(), r.mean_pcc[static_cast<std::size_t>(q)]);
  }
  std::printf("mean   %.4f\n", r.overall);
}

int serve(const PipelineConfig& config, const std::string& catalog_flag, int port) {
  std::string path = catalog_flag;
  if (path.empty()) {
    if (const char* env = std::getenv("PLANSCORE_CATALOG")) path = env;
  }
  if (path.empty()) path = (config.workdir / artifact::kCatalog).string();
  CatalogStore store;
  store.swap(load_catalog(path));
  auto options = config.serve;
  if (port >= 0) options.port = port;
  SearchServer server(store, options);
  server.start();
  std::printf("serving %zu plans from %s on http://%s:%d\n", store.snapshot()->size(), path.c_str(),
              options.host.c_str(), server.port());
  std::fflush(stdout);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planscore: floor-plan quality scoring and search"};
  app.require_subcommand(1);
  Common common;

  std::vector<std::pair<CLI::App*, std::string>> stage_cmds;
  bool force = false;
  for (const auto& s : pipeline_stages()) {
    auto* cmd = app.add_subcommand(s.name, "run the " + s.name + " stage");
    add_common(cmd, common);
    cmd->add_flag("--force", force, "rerun even when cached outputs are current");
    stage_cmds.emplace_back(cmd, s.name);
  }

  auto* run = app.add_subcommand("run", "run every stage up to --until (default: catalog)");
  add_common(run, common);
  std::string until = "catalog";
  run->add_option("--until", until, "last stage to run");

  auto* evaluate = app.add_subcommand("evaluate", "resampled 8:1:1 evaluation of the 10 regressors");
  add_common(evaluate, common);
  bool shuffled = false;
  evaluate->add_flag("--shuffled", shuffled, "permute score vectors across plans first (control)");

  auto* verify = app.add_subcommand("verify", "run a brute-force or property suite");
  add_common(verify, common);
  std::string suite;
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  auto* serve_cmd = app.add_subcommand("serve", "serve the search API over a catalog");
  add_common(serve_cmd, common);
  int port = -1;
  std::string catalog_path;
  serve_cmd->add_option("--port", port, "port (0 picks a free one)");
  serve_cmd->add_option("--catalog", catalog_path, "catalog JSONL; else $PLANSCORE_CATALOG, else <workdir>/catalog.jsonl");

  auto* show = app.add_subcommand("config", "print the resolved config");
  add_common(show, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (const auto& [cmd, name] : stage_cmds) {
      if (!cmd->parsed()) continue;
      const Workspace ws(common.load());
      Manifest manifest(ws);
      print_run(run_stage(ws, manifest, find_stage(name), force));
      return 0;
    }
    if (run->parsed()) {
      find_stage(until);
      run_pipeline(common.load(), until, print_run);
      return 0;
    }
    if (evaluate->parsed()) {
      print_pcc(evaluate_workspace(common.load(), shuffled));
      return 0;
    }
    if (verify->parsed()) {
      const auto r = run_suite(suite);
      std::printf("%s %s: %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.suite.c_str(), r.summary.c_str(), r.seconds);
      std::printf("%s\n", r.metrics.dump().c_str());
      if (!r.passed) {
        const Error err(ErrorCode::kSuiteFailure, r.suite + ": " + r.counterexample);
        std::fprintf(stderr, "%s\n", err.what());
        return 1;
      }
      return 0;
    }
    if (serve_cmd->parsed()) return serve(common.load(), catalog_path, port);
    if (show->parsed()) {
      const auto c = common.load();
      auto j = c.raw;
      j["workdir"] = c.workdir.string();
      std::printf("%s\n", j.dump(2).c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
