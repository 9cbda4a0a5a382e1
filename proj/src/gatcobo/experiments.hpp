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

#include "gatcobo/config.hpp"
#include "gatcobo/metrics.hpp"
#include "gatcobo/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gatcobo {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void addRow(std::vector<std::string> row);
  std::string toCsv() const;
  // Index of a named column; throws ContractError when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

// Shortest round-trip decimal text.
std::string formatNumber(double value);

struct RunResult {
  EnsembleModel model;
  Prediction prediction;
  EvalReport val;
  EvalReport test;
};

// Trains on the graph's train split and reports val and test metrics.
RunResult trainAndEvaluate(const Graph& g, const RunConfig& config);

// JSON written by `train`: config plus val and test reports. Free of timing,
// so identical runs produce identical text.
std::string trainReportJson(const RunConfig& config, const RunResult& result);

// Columns: ir, achieved_ir, seed, scheme, g_mean, macro_auc, macro_recall,
// macro_f1. One row per (seed, ir).
Table irSweep(const RunConfig& config);
// Columns: layers, seed, g_mean, macro_auc, macro_recall, macro_f1 and, with
// the ablation enabled, stacked_g_mean, stacked_macro_auc, stacked_macro_recall.
Table depthSweep(const RunConfig& config);
// Columns: train_fraction, hid, learning_rate, seed, g_mean, macro_auc,
// macro_recall, macro_f1. One row per grid cell and seed.
Table hpSweep(const RunConfig& config);

struct TimingResult {
  std::vector<std::vector<double>> epoch_ms;  // per run, every epoch of every stage
  std::vector<double> run_mean_ms;            // mean epoch time per run
  double median_ms = 0.0;                     // median of run_mean_ms
  Table toTable() const;
};

// Graph preparation happens once, outside the timed region.
TimingResult timeEpochs(const RunConfig& config);

struct BoundCase {
  int num_classes = 2;
  std::size_t stages = 1;
  CostScheme scheme = CostScheme::kUniform;
  std::uint64_t seed = 0;
  BoundReport report;
};

// Trains `count` small synthetic models cycling K in {2,3}, L in {1,2,3} and
// the three built-in schemes, verifying the training-cost bound on each.
std::vector<BoundCase> randomizedBoundCheck(std::size_t count, std::uint64_t seed,
                                            const GatConfig& base);
Table boundTable(const std::vector<BoundCase>& cases);

// Creates base/<prefix>-YYYYmmdd-HHMMSS, adding -1, -2, ... when taken. Never
// reuses an existing directory.
std::string makeRunDirectory(const std::string& base, const std::string& prefix);
void writeTextFile(const std::string& path, const std::string& text);

}  // namespace gatcobo
