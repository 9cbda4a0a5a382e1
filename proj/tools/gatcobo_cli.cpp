/*
 * Copyright 2026 The gatcobo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gatcobo/gatcobo.h"

#include "CLI11.hpp"

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitCheckFailed = 1;

struct CommonOptions {
  std::string config = "default";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string dataset;
};

struct Failure {
  gc_status status;
};

int exitCode(gc_status s) {
  switch (s) {
    case GC_OK: return 0;
    case GC_ERR_CONFIG:
    case GC_ERR_CONTRACT:
    case GC_ERR_ARGUMENT: return 2;
    case GC_ERR_DATA:
    case GC_ERR_DIMENSION: return 3;
    case GC_ERR_TRAINING:
    case GC_ERR_DOMAIN: return 4;
    default: return 1;
  }
}

void check(gc_status s) {
  if (s != GC_OK) {
    std::fprintf(stderr, "gatcobo: %s: %s\n", gc_status_name(s), gc_last_error());
    throw Failure{s};
  }
}

struct StringDeleter {
  void operator()(char* s) const { gc_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct GraphDeleter {
  void operator()(gc_graph* g) const { gc_graph_free(g); }
};
using Graph = std::unique_ptr<gc_graph, GraphDeleter>;

struct ModelDeleter {
  void operator()(gc_model* m) const { gc_model_free(m); }
};
using Model = std::unique_ptr<gc_model, ModelDeleter>;

void addCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "config JSON file or preset (default, sichuan, bupt)");
  cmd->add_option("--seed", o.seed, "run seed; overrides the config");
  cmd->add_option("--out", o.out, "output root; a timestamped run directory is created inside");
  cmd->add_option("--dataset", o.dataset, "synthetic, a dataset directory, or a name under "
                                          "$GATCOBO_DATA_DIR");
}

OwnedString resolveConfig(const CommonOptions& o) {
  char* json = nullptr;
  check(gc_config_resolve(o.config.c_str(), o.dataset.empty() ? nullptr : o.dataset.c_str(),
                          o.seed.has_value(), o.seed.value_or(0),
                          o.out.empty() ? nullptr : o.out.c_str(), &json));
  return OwnedString(json);
}

std::string outputRoot(const CommonOptions& o, const std::string& config_json) {
  if (!o.out.empty()) return o.out;
  const std::string key = "\"output_dir\": \"";
  const auto at = config_json.find(key);
  if (at == std::string::npos) return "runs";
  const auto start = at + key.size();
  return config_json.substr(start, config_json.find('"', start) - start);
}

std::string runDir(const CommonOptions& o, const std::string& config_json,
                   const std::string& prefix) {
  char* path = nullptr;
  check(gc_make_run_dir(outputRoot(o, config_json).c_str(), prefix.c_str(), &path));
  const std::string dir(path);
  gc_string_free(path);
  check(gc_write_file((dir + "/config.json").c_str(), config_json.c_str()));
  return dir;
}

void writeFile(const std::string& path, const std::string& text) {
  check(gc_write_file(path.c_str(), text.c_str()));
}

Graph prepareGraph(const char* config_json) {
  gc_graph* g = nullptr;
  check(gc_graph_prepare(config_json, &g));
  return Graph(g);
}

int cmdTrain(const CommonOptions& o) {
  const OwnedString cfg = resolveConfig(o);
  const Graph g = prepareGraph(cfg.get());
  gc_model* raw = nullptr;
  char* report = nullptr;
  check(gc_train(cfg.get(), g.get(), &raw, &report));
  const Model model(raw);
  const OwnedString report_owned(report);
  const std::string dir = runDir(o, cfg.get(), "train");
  check(gc_model_save(model.get(), (dir + "/model.json").c_str()));
  writeFile(dir + "/report.json", std::string(report) + "\n");
  std::printf("%s\n", report);
  std::fprintf(stderr, "run directory: %s\n", dir.c_str());
  return 0;
}

gc_split parseSplit(const std::string& s) {
  if (s == "train") return GC_SPLIT_TRAIN;
  if (s == "val") return GC_SPLIT_VAL;
  if (s == "test") return GC_SPLIT_TEST;
  throw CLI::ValidationError("--split", "expected train, val or test");
}

int cmdEvaluate(const CommonOptions& o, const std::string& model_path, const std::string& split) {
  const OwnedString cfg = resolveConfig(o);
  const Graph g = prepareGraph(cfg.get());
  gc_model* raw = nullptr;
  check(gc_model_load(model_path.c_str(), &raw));
  const Model model(raw);
  char* report = nullptr;
  check(gc_evaluate(model.get(), g.get(), parseSplit(split), &report));
  const OwnedString owned(report);
  if (!o.out.empty()) {
    const std::string dir = runDir(o, cfg.get(), "evaluate");
    writeFile(dir + "/report.json", std::string(report) + "\n");
    std::fprintf(stderr, "run directory: %s\n", dir.c_str());
  }
  std::printf("%s\n", report);
  return 0;
}

using SweepFn = gc_status (*)(const char*, char**);

int cmdSweep(const CommonOptions& o, SweepFn fn, const std::string& name) {
  const OwnedString cfg = resolveConfig(o);
  char* csv = nullptr;
  check(fn(cfg.get(), &csv));
  const OwnedString owned(csv);
  const std::string dir = runDir(o, cfg.get(), name);
  writeFile(dir + "/" + name + ".csv", csv);
  std::printf("%s", csv);
  std::fprintf(stderr, "run directory: %s\n", dir.c_str());
  return 0;
}

int cmdTimeEpochs(const CommonOptions& o) {
  const OwnedString cfg = resolveConfig(o);
  char* csv = nullptr;
  double median = 0.0;
  check(gc_time_epochs(cfg.get(), &csv, &median));
  const OwnedString owned(csv);
  const std::string dir = runDir(o, cfg.get(), "time-epochs");
  writeFile(dir + "/timing.csv", csv);
  std::printf("%smedian_epoch_ms,%.6f\n", csv, median);
  std::fprintf(stderr, "run directory: %s\n", dir.c_str());
  return 0;
}

int cmdGenSynthetic(const CommonOptions& o) {
  const OwnedString cfg = resolveConfig(o);
  gc_graph* raw = nullptr;
  check(gc_graph_generate(cfg.get(), &raw));
  const Graph g(raw);
  const std::string dir = runDir(o, cfg.get(), "synthetic");
  check(gc_graph_save(g.get(), (dir + "/nodes.csv").c_str(), (dir + "/edges.csv").c_str()));
  char* info = nullptr;
  check(gc_graph_info(g.get(), &info));
  const OwnedString owned(info);
  std::printf("%s\n", info);
  std::fprintf(stderr, "dataset directory: %s\n", dir.c_str());
  return 0;
}

int cmdVerifyBound(const CommonOptions& o, const std::string& model_path, std::size_t count) {
  const OwnedString cfg = resolveConfig(o);
  if (!model_path.empty()) {
    const Graph g = prepareGraph(cfg.get());
    gc_model* raw = nullptr;
    check(gc_model_load(model_path.c_str(), &raw));
    const Model model(raw);
    char* report = nullptr;
    check(gc_verify_bound(model.get(), g.get(), &report));
    const OwnedString owned(report);
    std::printf("%s\n", report);
    return std::string(report).find("\"holds\":true") != std::string::npos ? 0 : kExitCheckFailed;
  }
  char* csv = nullptr;
  std::size_t violations = 0;
  check(gc_verify_bound_random(cfg.get(), count, o.seed.value_or(0), &csv, &violations));
  const OwnedString owned(csv);
  const std::string dir = runDir(o, cfg.get(), "verify-bound");
  writeFile(dir + "/bound.csv", csv);
  std::printf("%sviolations,%zu\n", csv, violations);
  std::fprintf(stderr, "run directory: %s\n", dir.c_str());
  return violations == 0 ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-sensitive boosted graph attention for imbalanced node classification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gc_version());

  CommonOptions opts;
  std::string model_path, split = "test";
  std::size_t count = 20;

  auto* train = app.add_subcommand("train", "train a model and report val/test metrics");
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a saved model");
  auto* ir = app.add_subcommand("ir-sweep", "train across imbalance ratios");
  auto* depth = app.add_subcommand("depth-sweep", "train across boosting depths");
  auto* hp = app.add_subcommand("hp-sweep", "grid over train fraction, hid and learning rate");
  auto* timing = app.add_subcommand("time-epochs", "per-epoch training time over repeated runs");
  auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic block-model dataset");
  auto* bound = app.add_subcommand("verify-bound", "check the training-cost bound");
  for (auto* c : {train, evaluate, ir, depth, hp, timing, gen, bound}) addCommon(c, opts);
  evaluate->add_option("--model", model_path, "model checkpoint")->required();
  evaluate->add_option("--split", split, "train, val or test");
  bound->add_option("--model", model_path, "model checkpoint; omit for randomized models");
  bound->add_option("--count", count, "number of randomized models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmdTrain(opts);
    if (*evaluate) return cmdEvaluate(opts, model_path, split);
    if (*ir) return cmdSweep(opts, gc_ir_sweep, "ir-sweep");
    if (*depth) return cmdSweep(opts, gc_depth_sweep, "depth-sweep");
    if (*hp) return cmdSweep(opts, gc_hp_sweep, "hp-sweep");
    if (*timing) return cmdTimeEpochs(opts);
    if (*gen) return cmdGenSynthetic(opts);
    if (*bound) return cmdVerifyBound(opts, model_path, count);
  } catch (const Failure& f) {
    return exitCode(f.status);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "gatcobo: %s\n", e.what());
    return 2;
  }
  return 1;
}
