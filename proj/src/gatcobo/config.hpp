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

#pragma once

#include "gatcobo/graph.hpp"
#include "gatcobo/pipeline.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gatcobo {

struct DatasetConfig {
  // "synthetic" generates a block-model graph; "files" reads CSVs.
  std::string kind = "synthetic";
  std::string nodes_path;
  std::string edges_path;
  std::string splits_path;  // optional explicit split lists
  LoadOptions load;
  SyntheticSpec synthetic;
};

struct SweepConfig {
  std::vector<double> ir_list{0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<std::size_t> layer_list{1, 2, 3, 4, 5};
  std::vector<std::uint64_t> seeds{0};
  std::vector<double> train_fractions{0.2};
  std::vector<std::size_t> hids{32, 64, 128};
  std::vector<double> learning_rates{0.005};
  std::size_t timing_runs = 5;
  bool ablation = true;
};

struct RunConfig {
  DatasetConfig dataset;
  SplitSpec split;
  GatConfig gat;
  BoostConfig boost;
  std::uint64_t seed = 0;
  std::string output_dir = "runs";
  SweepConfig sweep;

  void validate() const;
  nlohmann::json toJson() const;
};

// Strict JSON reader: unknown keys are rejected. Relative dataset paths are
// resolved against `base_dir`. Throws ConfigError.
RunConfig parseRunConfig(const std::string& text, const std::string& base_dir = "");
RunConfig loadRunConfig(const std::string& path);

// "default", "sichuan", "bupt".
RunConfig presetConfig(const std::string& name);
// A preset name or a JSON file path.
RunConfig resolveRunConfig(const std::string& name_or_path);

// "synthetic", a directory holding nodes.csv and edges.csv (plus optional
// splits.json), or a dataset name looked up under $GATCOBO_DATA_DIR.
void applyDatasetArgument(RunConfig& config, const std::string& name_or_path);

// Sets the run seed and every seed derived from it.
void applySeed(RunConfig& config, std::uint64_t seed);

// Loads or generates the graph without assigning splits.
Graph loadDataset(const RunConfig& config);
// Explicit split file when configured, stratified split otherwise.
Graph assignSplits(Graph g, const RunConfig& config);
// loadDataset followed by assignSplits.
Graph prepareGraph(const RunConfig& config);

}  // namespace gatcobo
