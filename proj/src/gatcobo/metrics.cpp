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

#include "gatcobo/metrics.hpp"

#include "gatcobo/errors.hpp"
#include "gatcobo/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gatcobo {
namespace {

std::size_t rowTotal(const Confusion& c, std::size_t i) {
  return std::accumulate(c[i].begin(), c[i].end(), std::size_t{0});
}

std::size_t colTotal(const Confusion& c, std::size_t j) {
  std::size_t s = 0;
  for (const auto& row : c) s += row[j];
  return s;
}

void note(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings != nullptr) warnings->push_back(msg);
}

}  // namespace

Confusion confusionMatrix(std::span<const int> predicted, std::span<const int> truth,
                          int num_classes) {
  if (predicted.size() != truth.size()) {
    throw ContractError("predictions and labels differ in length");
  }
  if (num_classes < 1) throw ContractError("confusion matrix needs at least one class");
  const auto k = static_cast<std::size_t>(num_classes);
  Confusion c(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes) {
      throw ContractError("label out of range at position " + std::to_string(i));
    }
    ++c[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  return c;
}

double macroRecall(const Confusion& c, std::vector<std::string>* warnings) {
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t support = rowTotal(c, i);
    if (support == 0) {
      note(warnings, "class " + std::to_string(i) + " has no support; excluded from macro recall");
      continue;
    }
    sum += static_cast<double>(c[i][i]) / static_cast<double>(support);
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

double macroF1(const Confusion& c, std::vector<std::string>* warnings) {
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t support = rowTotal(c, i);
    const std::size_t predicted = colTotal(c, i);
    if (support == 0 && predicted == 0) {
      note(warnings, "class " + std::to_string(i) + " is neither present nor predicted; excluded "
                     "from macro F1");
      continue;
    }
    const double tp = static_cast<double>(c[i][i]);
    const double p = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    const double r = support == 0 ? 0.0 : tp / static_cast<double>(support);
    sum += p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

double gMean(const Confusion& c, std::vector<std::string>* warnings) {
  double log_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t support = rowTotal(c, i);
    if (support == 0) {
      note(warnings, "class " + std::to_string(i) + " has no support; excluded from G-mean");
      continue;
    }
    if (c[i][i] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(c[i][i]) / static_cast<double>(support));
    ++used;
  }
  return used == 0 ? 0.0 : std::exp(log_sum / static_cast<double>(used));
}

double rankAuc(std::span<const double> scores, std::span<const int> truth, int positive_class) {
  const std::size_t n = scores.size();
  if (truth.size() != n) throw ContractError("scores and labels differ in length");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Ranks are 1-based; a run of ties shares the mean of its ranks.
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (truth[order[k]] == positive_class) {
        pos_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j + 1;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::numeric_limits<double>::quiet_NaN();
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

double macroAUC(const Matrix& scores, std::span<const int> truth,
                std::vector<std::string>* warnings) {
  if (scores.rows() != truth.size()) throw ContractError("scores and labels differ in length");
  double sum = 0.0;
  std::size_t used = 0;
  std::vector<double> column(scores.rows());
  for (std::size_t k = 0; k < scores.cols(); ++k) {
    for (std::size_t r = 0; r < scores.rows(); ++r) column[r] = scores(r, k);
    const double auc = rankAuc(column, truth, static_cast<int>(k));
    if (std::isnan(auc)) {
      note(warnings, "class " + std::to_string(k) +
                         " lacks positives or negatives; excluded from macro AUC");
      continue;
    }
    sum += auc;
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

EvalReport makeReport(std::span<const int> predicted, std::span<const int> truth,
                      const Matrix& scores, int num_classes, std::string split_name) {
  EvalReport r;
  r.split = std::move(split_name);
  r.num_nodes = truth.size();
  r.num_classes = num_classes;
  r.confusion = confusionMatrix(predicted, truth, num_classes);
  r.macro_recall = macroRecall(r.confusion, &r.warnings);
  r.macro_f1 = macroF1(r.confusion);
  r.g_mean = gMean(r.confusion);
  r.macro_auc = macroAUC(scores, truth, &r.warnings);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
  r.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());

  std::vector<double> column(scores.rows());
  for (std::size_t k = 0; k < static_cast<std::size_t>(num_classes); ++k) {
    ClassMetrics m;
    m.support = rowTotal(r.confusion, k);
    m.predicted = colTotal(r.confusion, k);
    const double tp = static_cast<double>(r.confusion[k][k]);
    m.precision = m.predicted ? tp / static_cast<double>(m.predicted) : 0.0;
    m.recall = m.support ? tp / static_cast<double>(m.support) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    for (std::size_t i = 0; i < scores.rows(); ++i) column[i] = scores(i, k);
    const double auc = rankAuc(column, truth, static_cast<int>(k));
    m.auc = std::isnan(auc) ? 0.0 : auc;
    r.per_class.push_back(m);
  }
  for (const auto& w : r.warnings) warn(w);
  return r;
}

nlohmann::json EvalReport::toJson(bool include_timing) const {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& m : per_class) {
    classes.push_back({{"support", m.support},
                       {"predicted", m.predicted},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"auc", m.auc}});
  }
  nlohmann::json j{{"split", split},
                   {"num_nodes", num_nodes},
                   {"num_classes", num_classes},
                   {"confusion", confusion},
                   {"accuracy", accuracy},
                   {"macro_recall", macro_recall},
                   {"macro_f1", macro_f1},
                   {"macro_auc", macro_auc},
                   {"g_mean", g_mean},
                   {"per_class", classes},
                   {"warnings", warnings}};
  if (include_timing) j["wall_time_per_epoch_ms"] = wall_time_per_epoch_ms;
  return j;
}

}  // namespace gatcobo
