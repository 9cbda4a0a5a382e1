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

#include "gatcobo/matrix.hpp"

#include "json.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gatcobo {

// confusion[i][j]: nodes of true class i predicted as j.
using Confusion = std::vector<std::vector<std::size_t>>;

Confusion confusionMatrix(std::span<const int> predicted, std::span<const int> truth,
                          int num_classes);

// Metrics below skip classes without support (and, for F1, classes that are
// neither present nor predicted). Each skipped class appends a message to
// `warnings` when given. A confusion with no eligible class yields 0.
double macroRecall(const Confusion& c, std::vector<std::string>* warnings = nullptr);
double macroF1(const Confusion& c, std::vector<std::string>* warnings = nullptr);
// Geometric mean of the per-class recalls; sqrt(TPR * TNR) for two classes.
double gMean(const Confusion& c, std::vector<std::string>* warnings = nullptr);

// One-vs-rest rank AUC of column k of `scores`, average ranks for ties.
// Returns NaN when class k has no positive or no negative.
double rankAuc(std::span<const double> scores, std::span<const int> truth, int positive_class);
double macroAUC(const Matrix& scores, std::span<const int> truth,
                std::vector<std::string>* warnings = nullptr);

struct ClassMetrics {
  std::size_t support = 0;
  std::size_t predicted = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
};

struct EvalReport {
  std::string split;
  std::size_t num_nodes = 0;
  int num_classes = 0;
  Confusion confusion;
  double accuracy = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double macro_auc = 0.0;
  double g_mean = 0.0;
  std::vector<ClassMetrics> per_class;
  std::vector<double> wall_time_per_epoch_ms;
  std::vector<std::string> warnings;

  // Timing is left out unless requested so that reports of identical runs
  // compare byte for byte.
  nlohmann::json toJson(bool include_timing = false) const;
};

// `scores` holds one row per evaluated node (already restricted).
EvalReport makeReport(std::span<const int> predicted, std::span<const int> truth,
                      const Matrix& scores, int num_classes, std::string split_name);

}  // namespace gatcobo
